// Copyright 2026 Snakes Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "snakes/matching.h"

#include <algorithm>
#include <stdexcept>

namespace snakes {

namespace {

int wrap(int j, int size) {
    return ((j % size) + size) % size;
}

class BlossomMatcher {
   public:
    BlossomMatcher(int n, const std::vector<WeightedEdge> &edges, bool max_cardinality)
        : n_(n), edges_(edges), max_cardinality_(max_cardinality) {
        int m = (int)edges_.size();
        int64_t max_weight = 0;
        for (auto &e : edges_) {
            if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
                throw std::invalid_argument("Invalid matching edge.");
            }
            // Doubling keeps every dual update integral.
            e.weight *= 2;
            max_weight = std::max(max_weight, e.weight);
        }
        endpoint_.resize(2 * m);
        for (int p = 0; p < 2 * m; p++) {
            endpoint_[p] = p % 2 == 0 ? edges_[p / 2].u : edges_[p / 2].v;
        }
        neighbend_.assign(n, {});
        for (int k = 0; k < m; k++) {
            neighbend_[edges_[k].u].push_back(2 * k + 1);
            neighbend_[edges_[k].v].push_back(2 * k);
        }
        mate_.assign(n, -1);
        label_.assign(2 * n, 0);
        labelend_.assign(2 * n, -1);
        inblossom_.resize(n);
        for (int v = 0; v < n; v++) {
            inblossom_[v] = v;
        }
        blossomparent_.assign(2 * n, -1);
        blossomchilds_.assign(2 * n, {});
        blossombase_.assign(2 * n, -1);
        for (int v = 0; v < n; v++) {
            blossombase_[v] = v;
        }
        blossomendps_.assign(2 * n, {});
        bestedge_.assign(2 * n, -1);
        blossombestedges_.assign(2 * n, {});
        has_bestedges_.assign(2 * n, false);
        for (int b = 2 * n - 1; b >= n; b--) {
            unusedblossoms_.push_back(b);
        }
        dualvar_.assign(2 * n, 0);
        for (int v = 0; v < n; v++) {
            dualvar_[v] = max_weight;
        }
        allowedge_.assign(m, false);
    }

    std::vector<int> run();

   private:
    int64_t slack(int k) const {
        const auto &e = edges_[k];
        return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
    }

    void blossom_leaves(int b, std::vector<int> &out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[b]) {
            blossom_leaves(t, out);
        }
    }

    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        blossom_leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int n_;
    std::vector<WeightedEdge> edges_;
    bool max_cardinality_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<bool> has_bestedges_;
    std::vector<int> unusedblossoms_;
    std::vector<int64_t> dualvar_;
    std::vector<bool> allowedge_;
    std::vector<int> queue_;
};

void BlossomMatcher::assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        blossom_leaves(b, queue_);
    } else if (t == 2) {
        int base = blossombase_[b];
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

int BlossomMatcher::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = blossombase_[b];
            break;
        }
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) {
            std::swap(v, w);
        }
    }
    for (int b : path) {
        label_[b] = 1;
    }
    return base;
}

void BlossomMatcher::add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    std::vector<int> path;
    std::vector<int> endps;
    while (bv != bb) {
        blossomparent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        blossomparent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    blossomchilds_[b] = path;
    blossomendps_[b] = endps;
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    for (int leaf : leaves(b)) {
        if (label_[inblossom_[leaf]] == 2) {
            queue_.push_back(leaf);
        }
        inblossom_[leaf] = b;
    }
    std::vector<int> bestedgeto(2 * n_, -1);
    for (int child : path) {
        std::vector<std::vector<int>> nblists;
        if (!has_bestedges_[child]) {
            for (int leaf : leaves(child)) {
                std::vector<int> list;
                for (int p : neighbend_[leaf]) {
                    list.push_back(p / 2);
                }
                nblists.push_back(std::move(list));
            }
        } else {
            nblists.push_back(blossombestedges_[child]);
        }
        for (const auto &nblist : nblists) {
            for (int e : nblist) {
                int i = edges_[e].u;
                int j = edges_[e].v;
                if (inblossom_[j] == b) {
                    std::swap(i, j);
                }
                int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(e) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = e;
                }
            }
        }
        blossombestedges_[child].clear();
        has_bestedges_[child] = false;
        bestedge_[child] = -1;
    }
    blossombestedges_[b].clear();
    for (int e : bestedgeto) {
        if (e != -1) {
            blossombestedges_[b].push_back(e);
        }
    }
    has_bestedges_[b] = true;
    bestedge_[b] = -1;
    for (int e : blossombestedges_[b]) {
        if (bestedge_[b] == -1 || slack(e) < slack(bestedge_[b])) {
            bestedge_[b] = e;
        }
    }
}

void BlossomMatcher::expand_blossom(int b, bool endstage) {
    for (int s : blossomchilds_[b]) {
        blossomparent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dualvar_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            for (int leaf : leaves(s)) {
                inblossom_[leaf] = s;
            }
        }
    }
    if (!endstage && label_[b] == 2) {
        const auto &childs = blossomchilds_[b];
        const auto &endps = blossomendps_[b];
        int size = (int)childs.size();
        int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int j = (int)(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
        int jstep;
        int endptrick;
        if (j & 1) {
            j -= size;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[endps[wrap(j - endptrick, size)] ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[endps[wrap(j - endptrick, size)] / 2] = true;
            j += jstep;
            p = endps[wrap(j - endptrick, size)] ^ endptrick;
            allowedge_[p / 2] = true;
            j += jstep;
        }
        int bv = childs[wrap(j, size)];
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (childs[wrap(j, size)] != entrychild) {
            bv = childs[wrap(j, size)];
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            int found = -1;
            for (int leaf : leaves(bv)) {
                if (label_[leaf] != 0) {
                    found = leaf;
                    break;
                }
            }
            if (found != -1) {
                label_[found] = 0;
                label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                assign_label(found, 2, labelend_[found]);
            }
            j += jstep;
        }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = false;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
}

void BlossomMatcher::augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) {
        t = blossomparent_[t];
    }
    if (t >= n_) {
        augment_blossom(t, v);
    }
    auto &childs = blossomchilds_[b];
    auto &endps = blossomendps_[b];
    int size = (int)childs.size();
    int i = (int)(std::find(childs.begin(), childs.end(), t) - childs.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
        j -= size;
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = childs[wrap(j, size)];
        int p = endps[wrap(j - endptrick, size)] ^ endptrick;
        if (t >= n_) {
            augment_blossom(t, endpoint_[p]);
        }
        j += jstep;
        t = childs[wrap(j, size)];
        if (t >= n_) {
            augment_blossom(t, endpoint_[p ^ 1]);
        }
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[b] = blossombase_[childs[0]];
}

void BlossomMatcher::augment_matching(int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    for (auto [s, p] : {std::pair<int, int>{v, 2 * k + 1}, std::pair<int, int>{w, 2 * k}}) {
        while (true) {
            int bs = inblossom_[s];
            if (bs >= n_) {
                augment_blossom(bs, s);
            }
            mate_[s] = p;
            if (labelend_[bs] == -1) {
                break;
            }
            int t = endpoint_[labelend_[bs]];
            int bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            int j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= n_) {
                augment_blossom(bt, j);
            }
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int> BlossomMatcher::run() {
    int m = (int)edges_.size();
    for (int stage = 0; stage < n_; stage++) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = n_; b < 2 * n_; b++) {
            blossombestedges_[b].clear();
            has_bestedges_[b] = false;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), false);
        queue_.clear();
        for (int v = 0; v < n_; v++) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }
        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[v]) {
                    int k = p / 2;
                    int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) {
                        continue;
                    }
                    int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) {
                            allowedge_[k] = true;
                        }
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                            bestedge_[b] = k;
                        }
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                            bestedge_[w] = k;
                        }
                    }
                }
            }
            if (augmented) {
                break;
            }

            int deltatype = -1;
            int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!max_cardinality_) {
                deltatype = 1;
                delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
            }
            for (int v = 0; v < n_; v++) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n_; b++) {
                if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    int64_t d = slack(bestedge_[b]) / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n_; b < 2 * n_; b++) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                    (deltatype == -1 || dualvar_[b] < delta)) {
                    delta = dualvar_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n_));
            }

            for (int v = 0; v < n_; v++) {
                int l = label_[inblossom_[v]];
                if (l == 1) {
                    dualvar_[v] -= delta;
                } else if (l == 2) {
                    dualvar_[v] += delta;
                }
            }
            for (int b = n_; b < 2 * n_; b++) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                    if (label_[b] == 1) {
                        dualvar_[b] += delta;
                    } else if (label_[b] == 2) {
                        dualvar_[b] -= delta;
                    }
                }
            }

            if (deltatype == 1) {
                break;
            } else if (deltatype == 2) {
                allowedge_[deltaedge] = true;
                int i = edges_[deltaedge].u;
                int j = edges_[deltaedge].v;
                if (label_[inblossom_[i]] == 0) {
                    std::swap(i, j);
                }
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = true;
                queue_.push_back(edges_[deltaedge].u);
            } else if (deltatype == 4) {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) {
            break;
        }
        for (int b = n_; b < 2 * n_; b++) {
            if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }
    (void)m;
    std::vector<int> result(n_, -1);
    for (int v = 0; v < n_; v++) {
        if (mate_[v] >= 0) {
            result[v] = endpoint_[mate_[v]];
        }
    }
    return result;
}

}  // namespace

std::vector<int> max_weight_matching(int num_nodes, const std::vector<WeightedEdge> &edges, bool max_cardinality) {
    if (num_nodes < 0) {
        throw std::invalid_argument("Negative node count.");
    }
    if (edges.empty()) {
        return std::vector<int>(num_nodes, -1);
    }
    BlossomMatcher matcher(num_nodes, edges, max_cardinality);
    return matcher.run();
}

std::vector<int> min_cost_perfect_matching(int n, const std::vector<int64_t> &cost) {
    if (n % 2 != 0) {
        throw std::invalid_argument("A perfect matching needs an even number of nodes.");
    }
    if ((int64_t)cost.size() != (int64_t)n * n) {
        throw std::invalid_argument("Cost matrix has the wrong size.");
    }
    if (n == 0) {
        return {};
    }
    if (n == 2) {
        return {1, 0};
    }
    int64_t max_cost = 0;
    for (int64_t c : cost) {
        if (c < 0) {
            throw std::invalid_argument("Matching costs must be non-negative.");
        }
        max_cost = std::max(max_cost, c);
    }
    std::vector<WeightedEdge> edges;
    edges.reserve((size_t)n * (n - 1) / 2);
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            edges.push_back({i, j, max_cost + 1 - cost[(size_t)i * n + j]});
        }
    }
    auto mate = max_weight_matching(n, edges, true);
    for (int v : mate) {
        if (v < 0) {
            throw std::logic_error("Matcher failed to return a perfect matching.");
        }
    }
    return mate;
}

}  // namespace snakes
