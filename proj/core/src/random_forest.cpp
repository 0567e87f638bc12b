#include "diffsim/ml/random_forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "diffsim/rng.hpp"

namespace diffsim {

namespace {
constexpr std::uint64_t kForestSalt = 0x464F52455354ULL; // "FOREST"
}

const char* max_features_name(MaxFeaturesRule r) {
    switch (r) {
    case MaxFeaturesRule::kSqrt: return "sqrt";
    case MaxFeaturesRule::kFrac25: return "0.25";
    case MaxFeaturesRule::kFrac50: return "0.5";
    case MaxFeaturesRule::kFrac75: return "0.75";
    }
    return "sqrt";
}

int resolve_max_features(MaxFeaturesRule r, int n_features) {
    double v;
    switch (r) {
    case MaxFeaturesRule::kSqrt: v = std::sqrt(static_cast<double>(n_features)); break;
    case MaxFeaturesRule::kFrac25: v = 0.25 * n_features; break;
    case MaxFeaturesRule::kFrac50: v = 0.5 * n_features; break;
    default: v = 0.75 * n_features; break;
    }
    const int m = static_cast<int>(v);
    return m < 1 ? 1 : m;
}

int DecisionTree::predict(const std::vector<double>& x) const {
    int at = 0;
    while (nodes[at].feature >= 0)
        at = x[nodes[at].feature] <= nodes[at].threshold ? nodes[at].left
                                                         : nodes[at].right;
    return nodes[at].leaf_class;
}

namespace {

struct TreeBuilder {
    const std::vector<std::vector<double>>& x;
    const std::vector<int>& y;
    const std::vector<double>& class_weight;
    int n_classes;
    int n_features;
    int max_depth; // 0 = unlimited
    int min_samples_split;
    int max_features;
    Rng& rng;
    std::vector<TreeNode> nodes;

    // Scratch reused across nodes.
    std::vector<int> feature_order;
    std::vector<std::pair<double, int>> sorted; // (value, class)

    int leaf(const std::vector<double>& wc) {
        int best = 0;
        for (int c = 1; c < n_classes; ++c)
            if (wc[c] > wc[best]) // strict: ties stay at the smaller index
                best = c;
        TreeNode node;
        node.leaf_class = best;
        nodes.push_back(node);
        return static_cast<int>(nodes.size()) - 1;
    }

    static double gini(const std::vector<double>& wc, double total) {
        if (total <= 0.0)
            return 0.0;
        double sq = 0.0;
        for (const double w : wc)
            sq += (w / total) * (w / total);
        return 1.0 - sq;
    }

    int build(std::vector<int>& idx, int depth) {
        std::vector<double> wc(n_classes, 0.0);
        double w_total = 0.0;
        for (const int i : idx) {
            wc[y[i]] += class_weight[y[i]];
            w_total += class_weight[y[i]];
        }
        bool pure = true;
        for (std::size_t k = 1; k < idx.size() && pure; ++k)
            pure = y[idx[k]] == y[idx[0]];
        if (pure || static_cast<int>(idx.size()) < min_samples_split ||
            (max_depth > 0 && depth >= max_depth))
            return leaf(wc);

        // Shuffled scan: visit features in random order, counting only
        // non-constant ones against the candidate budget.
        for (int f = 0; f < n_features; ++f)
            feature_order[f] = f;
        for (int f = n_features - 1; f > 0; --f)
            std::swap(feature_order[f],
                      feature_order[rng.uniform_int(static_cast<std::uint64_t>(f) + 1)]);

        int best_feature = -1;
        double best_threshold = 0.0, best_impurity = 0.0;
        int informative_seen = 0;
        std::vector<double> wl(n_classes);
        for (const int f : feature_order) {
            if (informative_seen >= max_features && best_feature >= 0)
                break;
            sorted.clear();
            for (const int i : idx)
                sorted.emplace_back(x[i][f], y[i]);
            std::sort(sorted.begin(), sorted.end());
            if (sorted.front().first == sorted.back().first)
                continue; // constant here; does not consume the budget
            ++informative_seen;

            std::fill(wl.begin(), wl.end(), 0.0);
            double w_left = 0.0;
            for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
                const double w = class_weight[sorted[k].second];
                wl[sorted[k].second] += w;
                w_left += w;
                if (sorted[k].first == sorted[k + 1].first)
                    continue;
                double sql = 0.0, sqr = 0.0;
                for (int c = 0; c < n_classes; ++c) {
                    sql += wl[c] * wl[c];
                    const double wr = wc[c] - wl[c];
                    sqr += wr * wr;
                }
                const double w_right = w_total - w_left;
                const double impurity = (w_left - sql / w_left) +
                                        (w_right - sqr / w_right);
                if (best_feature < 0 || impurity < best_impurity) {
                    best_feature = f;
                    best_impurity = impurity;
                    best_threshold = 0.5 * (sorted[k].first + sorted[k + 1].first);
                }
            }
        }
        if (best_feature < 0)
            return leaf(wc); // every feature constant over this node

        std::vector<int> left_idx, right_idx;
        for (const int i : idx)
            (x[i][best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);
        idx.clear();
        idx.shrink_to_fit();

        const int node_at = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[node_at].feature = best_feature;
        nodes[node_at].threshold = best_threshold;
        const int l = build(left_idx, depth + 1);
        const int r = build(right_idx, depth + 1);
        nodes[node_at].left = l;
        nodes[node_at].right = r;
        return node_at;
    }
};

} // namespace

RandomForest RandomForest::train(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y,
                                 const std::vector<std::string>& class_labels,
                                 const RfParams& params) {
    if (x.empty() || x.size() != y.size())
        throw std::invalid_argument("forest training needs matching, non-empty x/y");
    if (params.n_trees < 1)
        throw std::invalid_argument("forest needs at least one tree");
    const int n_classes = static_cast<int>(class_labels.size());
    const int n_features = static_cast<int>(x[0].size());
    const std::size_t n = x.size();

    std::vector<std::size_t> counts(n_classes, 0);
    for (const int c : y)
        ++counts[c];
    const std::vector<double> weight =
        resolve_class_weights(params.class_weights, class_labels, counts);

    RandomForest forest;
    forest.n_classes_ = n_classes;
    forest.trees_.resize(params.n_trees);
    const int max_feat = resolve_max_features(params.max_features, n_features);

    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= params.n_trees)
                return;
            Rng rng = Rng::from_words({params.seed, kForestSalt,
                                       static_cast<std::uint64_t>(t)});
            std::vector<int> idx(n);
            for (std::size_t k = 0; k < n; ++k)
                idx[k] = static_cast<int>(rng.uniform_int(n));
            TreeBuilder b{x,      y,          weight,
                          n_classes, n_features, params.max_depth,
                          params.min_samples_split, max_feat, rng};
            b.feature_order.resize(n_features);
            b.build(idx, 0);
            forest.trees_[t].nodes = std::move(b.nodes);
        }
    };
    unsigned hw = std::thread::hardware_concurrency();
    if (hw < 1)
        hw = 1;
    const int n_workers =
        static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(params.n_trees)));
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    return forest;
}

int RandomForest::predict(const std::vector<double>& x) const {
    std::vector<int> votes(n_classes_, 0);
    for (const auto& tree : trees_)
        ++votes[tree.predict(x)];
    int best = 0;
    for (int c = 1; c < n_classes_; ++c)
        if (votes[c] > votes[best])
            best = c;
    return best;
}

} // namespace diffsim
