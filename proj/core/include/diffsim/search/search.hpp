#pragma once
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "diffsim/rng.hpp"

namespace diffsim {

// Budget growth per halving round: geometric by eta from
// initial_budget, capped at max_budget.  initial_budget = 0 selects the
// value that reaches max_budget exactly when the survivor count reaches
// one: max_budget / eta^floor(log_eta(n_initial)).
struct HalvingSchedule {
    double max_budget = 1.0;
    int eta = 3;
    int n_initial = 9;
    double initial_budget = 0.0;

    double resolve_initial_budget() const {
        if (initial_budget > 0.0)
            return initial_budget;
        int steps = 0;
        double p = static_cast<double>(eta);
        while (p <= static_cast<double>(n_initial)) {
            ++steps;
            p *= eta;
        }
        double b = max_budget;
        for (int s = 0; s < steps; ++s)
            b /= eta;
        return b;
    }
};

template <typename Config>
struct Trial {
    int index = -1;
    // "random" or "halving" today; reserved so a model-based sampler can
    // be added without changing the log schema.
    std::string sampler;
    Config config{};
    double budget = 1.0;
    double score = 0.0;
    bool ok = false;
    std::string error;
    int round = -1; // halving round, -1 for random search
};

template <typename Config>
struct SearchOutcome {
    std::vector<Trial<Config>> trials;
    std::ptrdiff_t best = -1; // index into trials; -1 when every trial failed
};

namespace detail {

// Runs fn(i) for i in [0, n) on `workers` threads.  Results must be
// written to per-index slots so the outcome is order-independent.
template <typename Fn>
void parallel_indices(std::size_t n, int workers, Fn&& fn) {
    if (workers < 2 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), n));
    for (int t = 0; t < count; ++t)
        pool.emplace_back(loop);
    for (auto& t : pool)
        t.join();
}

} // namespace detail

// Uniform i.i.d. sampling; returns the argmax score (ties -> earliest
// trial).  Objective failures are logged and skipped in the ranking.
template <typename Space, typename Objective>
SearchOutcome<typename Space::Config> random_search(const Space& space,
                                                    Objective&& objective, int n_iter,
                                                    std::uint64_t seed,
                                                    int workers = 1) {
    if (n_iter < 1)
        throw std::invalid_argument("random_search needs n_iter >= 1");
    using Config = typename Space::Config;
    SearchOutcome<Config> out;
    out.trials.resize(n_iter);

    // Sample up front so the RNG stream is independent of evaluation
    // timing and worker count.
    Rng rng = Rng::from_words({seed, 0x534541524348ULL}); // "SEARCH"
    for (int i = 0; i < n_iter; ++i) {
        Trial<Config>& t = out.trials[i];
        t.index = i;
        t.sampler = "random";
        t.config = space.sample(rng);
        if (!space.contains(t.config))
            throw std::logic_error("sampled configuration left the search space");
    }

    detail::parallel_indices(out.trials.size(), workers, [&](std::size_t i) {
        Trial<Config>& t = out.trials[i];
        try {
            t.score = objective(t.config);
            t.ok = true;
        } catch (const std::exception& e) {
            t.error = e.what();
        } catch (...) {
            t.error = "unknown objective failure";
        }
    });

    for (std::size_t i = 0; i < out.trials.size(); ++i)
        if (out.trials[i].ok &&
            (out.best < 0 || out.trials[i].score > out.trials[out.best].score))
            out.best = static_cast<std::ptrdiff_t>(i);
    return out;
}

// Successive halving: evaluate n_initial sampled configurations at the
// initial budget, keep the top ceil(n/eta) for the next round at eta
// times the budget (capped at max), and repeat until the last survivor
// has been scored at max_budget.  Returns the best trial at the final
// budget.
template <typename Space, typename Objective>
SearchOutcome<typename Space::Config> successive_halving(const Space& space,
                                                         Objective&& objective,
                                                         const HalvingSchedule& schedule,
                                                         std::uint64_t seed,
                                                         int workers = 1) {
    if (schedule.eta < 2)
        throw std::invalid_argument("halving needs eta >= 2");
    if (schedule.n_initial < 1)
        throw std::invalid_argument("halving needs n_initial >= 1");
    if (schedule.max_budget <= 0.0)
        throw std::invalid_argument("halving needs a positive max budget");
    using Config = typename Space::Config;

    Rng rng = Rng::from_words({seed, 0x534541524348ULL}); // same stream as random
    std::vector<Config> candidates(schedule.n_initial);
    for (auto& c : candidates) {
        c = space.sample(rng);
        if (!space.contains(c))
            throw std::logic_error("sampled configuration left the search space");
    }

    SearchOutcome<Config> out;
    double budget = schedule.resolve_initial_budget();
    if (budget > schedule.max_budget)
        budget = schedule.max_budget;
    double last_budget = -1.0;
    int round = 0;
    for (;;) {
        // A single survivor re-scored at an unchanged budget would learn
        // nothing; the schedule is complete.
        if (candidates.size() == 1 && budget == last_budget)
            break;

        const std::size_t base = out.trials.size();
        out.trials.resize(base + candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            Trial<Config>& t = out.trials[base + i];
            t.index = static_cast<int>(base + i);
            t.sampler = "halving";
            t.config = candidates[i];
            t.budget = budget;
            t.round = round;
        }
        detail::parallel_indices(candidates.size(), workers, [&](std::size_t i) {
            Trial<Config>& t = out.trials[base + i];
            try {
                t.score = objective(t.config, t.budget);
                t.ok = true;
            } catch (const std::exception& e) {
                t.error = e.what();
            } catch (...) {
                t.error = "unknown objective failure";
            }
        });

        // Rank this round: best score first, failures last, ties toward
        // the earlier trial.
        std::vector<std::size_t> order(candidates.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             const Trial<Config>& ta = out.trials[base + a];
                             const Trial<Config>& tb = out.trials[base + b];
                             if (ta.ok != tb.ok)
                                 return ta.ok;
                             return ta.score > tb.score;
                         });

        if (candidates.size() == 1 && budget >= schedule.max_budget)
            break;

        const std::size_t survivors =
            (candidates.size() + schedule.eta - 1) / schedule.eta;
        std::vector<Config> next;
        next.reserve(survivors);
        for (std::size_t i = 0; i < survivors; ++i)
            next.push_back(candidates[order[i]]);
        candidates = std::move(next);
        last_budget = budget;
        budget = std::min(budget * schedule.eta, schedule.max_budget);
        ++round;
    }

    // Best trial at the highest budget actually evaluated.
    double final_budget = 0.0;
    for (const auto& t : out.trials)
        if (t.ok && t.budget > final_budget)
            final_budget = t.budget;
    for (std::size_t i = 0; i < out.trials.size(); ++i) {
        const auto& t = out.trials[i];
        if (t.ok && t.budget == final_budget &&
            (out.best < 0 || t.score > out.trials[out.best].score))
            out.best = static_cast<std::ptrdiff_t>(i);
    }
    return out;
}

} // namespace diffsim
