#include "diffsim/ml/svm.hpp"

#include <cmath>
#include <cstdio>
#include <list>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace diffsim {

namespace {

double rbf(const std::vector<double>& a, const std::vector<double>& b, double gamma) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

// Kernel rows, either precomputed (shared full Gram) or produced on
// demand through a bounded LRU of rows.
class KernelCache {
public:
    KernelCache(const std::vector<std::vector<double>>& x, double gamma,
                const std::vector<double>* full_gram, std::size_t cache_mb)
        : x_(x), gamma_(gamma), n_(x.size()), full_(full_gram) {
        if (!full_) {
            capacity_ = cache_mb * (1u << 20) / (sizeof(double) * n_);
            if (capacity_ < 4)
                capacity_ = 4;
        }
    }

    const double* row(std::size_t i) {
        if (full_)
            return full_->data() + i * n_;
        if (const auto it = rows_.find(i); it != rows_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.first);
            return it->second.second.data();
        }
        if (rows_.size() >= capacity_) {
            rows_.erase(lru_.back());
            lru_.pop_back();
        }
        std::vector<double> r(n_);
        for (std::size_t j = 0; j < n_; ++j)
            r[j] = rbf(x_[i], x_[j], gamma_);
        lru_.push_front(i);
        auto [it, inserted] =
            rows_.emplace(i, std::make_pair(lru_.begin(), std::move(r)));
        return it->second.second.data();
    }

private:
    const std::vector<std::vector<double>>& x_;
    double gamma_;
    std::size_t n_;
    const std::vector<double>* full_;
    std::size_t capacity_ = 0;
    std::list<std::size_t> lru_;
    std::unordered_map<std::size_t,
                       std::pair<std::list<std::size_t>::iterator, std::vector<double>>>
        rows_;
};

struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
    long iterations = 0;
    std::vector<double> dual_trace;
};

// Binary soft-margin dual solved by SMO.  Convention: minimize
// 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij, 0 <= a_i <= C_i, y'a = 0.
// Working pair = maximal KKT violation:
//   i = argmax_{I_up} -y G,   j = argmin_{I_low} -y G.
SmoResult smo_solve(const std::vector<std::vector<double>>& x,
                    const std::vector<signed char>& y, const std::vector<double>& c,
                    KernelCache& cache, double tol, long max_iter) {
    const std::size_t n = x.size();
    constexpr double kTau = 1e-12;
    SmoResult res;
    res.alpha.assign(n, 0.0);
    std::vector<double> g(n, -1.0); // gradient of the dual at alpha = 0

    const auto dual_objective = [&] {
        // W = sum(a) - 1/2 a'Qa = 1/2 sum_i a_i (1 - G_i).
        double w = 0.0;
        for (std::size_t t = 0; t < n; ++t)
            w += res.alpha[t] * (1.0 - g[t]);
        return 0.5 * w;
    };

    long iter = 0;
    for (; iter < max_iter; ++iter) {
        // Working-set selection.
        std::ptrdiff_t i = -1, j = -1;
        double m_up = -1e300, m_low = 1e300;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * g[t];
            const bool in_up = y[t] > 0 ? res.alpha[t] < c[t] : res.alpha[t] > 0.0;
            const bool in_low = y[t] > 0 ? res.alpha[t] > 0.0 : res.alpha[t] < c[t];
            if (in_up && v > m_up) {
                m_up = v;
                i = static_cast<std::ptrdiff_t>(t);
            }
            if (in_low && v < m_low) {
                m_low = v;
                j = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (i < 0 || j < 0 || m_up - m_low <= tol)
            break;
        if (iter % 100 == 0)
            res.dual_trace.push_back(dual_objective());

        const std::size_t ii = static_cast<std::size_t>(i);
        const std::size_t jj = static_cast<std::size_t>(j);
        const double* ki = cache.row(ii);
        const double kii = ki[ii], kij = ki[jj];
        const double* kj = cache.row(jj);
        const double kjj = kj[jj];

        const double old_ai = res.alpha[ii], old_aj = res.alpha[jj];
        double& ai = res.alpha[ii];
        double& aj = res.alpha[jj];
        double quad = kii + kjj - 2.0 * kij;
        if (quad <= 0.0)
            quad = kTau;

        if (y[ii] != y[jj]) {
            const double delta = (-g[ii] - g[jj]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0) {
                if (aj < 0) { aj = 0; ai = diff; }
            } else {
                if (ai < 0) { ai = 0; aj = -diff; }
            }
            if (diff > c[ii] - c[jj]) {
                if (ai > c[ii]) { ai = c[ii]; aj = c[ii] - diff; }
            } else {
                if (aj > c[jj]) { aj = c[jj]; ai = c[jj] + diff; }
            }
        } else {
            const double delta = (g[ii] - g[jj]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c[ii]) {
                if (ai > c[ii]) { ai = c[ii]; aj = sum - c[ii]; }
            } else {
                if (aj < 0) { aj = 0; ai = sum; }
            }
            if (sum > c[jj]) {
                if (aj > c[jj]) { aj = c[jj]; ai = sum - c[jj]; }
            } else {
                if (ai < 0) { ai = 0; aj = sum; }
            }
        }

        const double dai = ai - old_ai, daj = aj - old_aj;
        // Re-fetch row i: obtaining row j may have evicted it.
        ki = cache.row(ii);
        for (std::size_t t = 0; t < n; ++t)
            g[t] += y[t] * (y[ii] * ki[t] * dai + y[jj] * kj[t] * daj);
    }
    if (iter >= max_iter)
        throw std::runtime_error("SMO did not converge within " +
                                 std::to_string(max_iter) + " iterations");
    res.iterations = iter;
    res.dual_trace.push_back(dual_objective());

    // Bias from the free support vectors; midpoint of the violation
    // bounds when none are free.
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double m_up = -1e300, m_low = 1e300;
    for (std::size_t t = 0; t < n; ++t) {
        const double v = -y[t] * g[t];
        const bool in_up = y[t] > 0 ? res.alpha[t] < c[t] : res.alpha[t] > 0.0;
        const bool in_low = y[t] > 0 ? res.alpha[t] > 0.0 : res.alpha[t] < c[t];
        if (in_up && v > m_up)
            m_up = v;
        if (in_low && v < m_low)
            m_low = v;
        if (res.alpha[t] > 0.0 && res.alpha[t] < c[t]) {
            free_sum += v;
            ++free_count;
        }
    }
    res.bias = free_count > 0 ? free_sum / static_cast<double>(free_count)
                              : 0.5 * (m_up + m_low);
    return res;
}

} // namespace

SvmModel SvmModel::train(const std::vector<std::vector<double>>& x,
                         const std::vector<int>& y,
                         const std::vector<std::string>& class_labels,
                         const SvmParams& params) {
    if (x.empty() || x.size() != y.size())
        throw std::invalid_argument("svm training needs matching, non-empty x/y");
    const std::size_t n = x.size();
    const std::size_t n_features = x[0].size();
    const int n_classes = static_cast<int>(class_labels.size());
    if (params.c <= 0.0)
        throw std::invalid_argument("svm C must be positive");

    SvmModel model;
    model.gamma_ = params.gamma;
    if (model.gamma_ == 0.0) {
        model.gamma_ = 1.0 / static_cast<double>(n_features);
        std::fprintf(stderr, "svm: gamma=0 resolved to 1/n_features = %g\n",
                     model.gamma_);
    }
    if (model.gamma_ <= 0.0)
        throw std::invalid_argument("svm gamma must resolve to a positive value");

    // Internal z-scoring (population sigma); constant features get
    // scale 1 so they standardize to zero.
    model.mean_.assign(n_features, 0.0);
    model.scale_.assign(n_features, 1.0);
    std::vector<std::vector<double>> xs(n, std::vector<double>(n_features));
    if (params.standardize) {
        for (std::size_t k = 0; k < n_features; ++k) {
            double mu = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                mu += x[t][k];
            mu /= static_cast<double>(n);
            double var = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                var += (x[t][k] - mu) * (x[t][k] - mu);
            var /= static_cast<double>(n);
            model.mean_[k] = mu;
            model.scale_[k] = var > 0.0 ? std::sqrt(var) : 1.0;
        }
    }
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t k = 0; k < n_features; ++k)
            xs[t][k] = (x[t][k] - model.mean_[k]) / model.scale_[k];

    std::vector<std::size_t> counts(n_classes, 0);
    for (const int c : y)
        ++counts[c];
    const std::vector<double> weight =
        resolve_class_weights(params.class_weights, class_labels, counts);

    // One shared Gram when it fits in the cache budget; otherwise each
    // subproblem streams rows through its own LRU.
    std::vector<double> full_gram;
    const bool gram_fits =
        n * n * sizeof(double) <= params.cache_mb * (std::size_t{1} << 20);
    if (gram_fits) {
        full_gram.resize(n * n);
        for (std::size_t a = 0; a < n; ++a) {
            full_gram[a * n + a] = 1.0;
            for (std::size_t b = a + 1; b < n; ++b) {
                const double v = rbf(xs[a], xs[b], model.gamma_);
                full_gram[a * n + b] = v;
                full_gram[b * n + a] = v;
            }
        }
    }

    model.binaries_.resize(n_classes);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto solve_class = [&](int cls) {
        try {
            std::vector<signed char> yb(n);
            std::vector<double> c_i(n);
            for (std::size_t t = 0; t < n; ++t) {
                yb[t] = y[t] == cls ? 1 : -1;
                c_i[t] = params.c * weight[y[t]];
            }
            KernelCache cache(xs, model.gamma_, gram_fits ? &full_gram : nullptr,
                              params.cache_mb);
            const SmoResult res = smo_solve(xs, yb, c_i, cache, params.tolerance,
                                            params.max_iterations);
            BinarySvm& bin = model.binaries_[cls];
            bin.bias = res.bias;
            bin.iterations = res.iterations;
            bin.dual_trace = res.dual_trace;
            for (std::size_t t = 0; t < n; ++t)
                if (res.alpha[t] > 0.0) {
                    bin.support.push_back(xs[t]);
                    bin.coef.push_back(res.alpha[t] * yb[t]);
                }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error)
                first_error = std::current_exception();
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    if (hw <= 1 || n_classes == 1) {
        for (int cls = 0; cls < n_classes; ++cls)
            solve_class(cls);
    } else {
        std::vector<std::thread> pool;
        for (int cls = 0; cls < n_classes; ++cls)
            pool.emplace_back(solve_class, cls);
        for (auto& t : pool)
            t.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);
    return model;
}

double SvmModel::decision(int cls, const std::vector<double>& x) const {
    std::vector<double> xs(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        xs[k] = (x[k] - mean_[k]) / scale_[k];
    const BinarySvm& bin = binaries_[cls];
    double f = bin.bias;
    for (std::size_t s = 0; s < bin.support.size(); ++s)
        f += bin.coef[s] * rbf(bin.support[s], xs, gamma_);
    return f;
}

int SvmModel::predict(const std::vector<double>& x) const {
    std::vector<double> xs(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        xs[k] = (x[k] - mean_[k]) / scale_[k];
    int best = 0;
    double best_f = -1e300;
    for (int cls = 0; cls < n_classes(); ++cls) {
        const BinarySvm& bin = binaries_[cls];
        double f = bin.bias;
        for (std::size_t s = 0; s < bin.support.size(); ++s)
            f += bin.coef[s] * rbf(bin.support[s], xs, gamma_);
        if (f > best_f) { // strict: ties keep the smaller class index
            best_f = f;
            best = cls;
        }
    }
    return best;
}

} // namespace diffsim
