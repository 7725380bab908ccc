#include "ldp/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "ldp/errors.hpp"
#include "ldp/predict.hpp"

namespace ldp::mc {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

template <class... Args>
std::string strf(const char* fmt, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return std::string(buf);
}

constexpr std::uint64_t kBlockSize = 4096;

struct BlockAccum {
    double sum_w = 0.0;
    double sum_w2 = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t capped = 0;
    std::uint64_t work = 0;
};

// Replications are split into fixed-size blocks claimed atomically by
// workers; block results are stored by block index and reduced in index
// order, so the totals do not depend on the worker count or scheduling.
template <class PerReplication>
BlockAccum run_blocks(std::uint64_t budget, int workers, const PerReplication& body) {
    const std::uint64_t n_blocks = (budget + kBlockSize - 1) / kBlockSize;
    std::vector<BlockAccum> blocks(n_blocks);
    std::atomic<std::uint64_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) return;
            BlockAccum acc;
            const std::uint64_t lo = b * kBlockSize;
            const std::uint64_t hi = std::min(budget, lo + kBlockSize);
            for (std::uint64_t i = lo; i < hi; ++i) body(i, acc);
            blocks[b] = acc;
        }
    };
    const int k = std::max(1, workers);
    if (k == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(k));
        for (int w = 0; w < k; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    BlockAccum total;
    for (const auto& b : blocks) {
        total.sum_w += b.sum_w;
        total.sum_w2 += b.sum_w2;
        total.hits += b.hits;
        total.capped += b.capped;
        total.work += b.work;
    }
    return total;
}

}  // namespace

TailEstimate estimate_tail(const models::SumModel& model, double x, std::uint64_t budget,
                           const SeedSpec& seeds, std::uint64_t cap, int workers) {
    require(budget >= 1000, "estimate_tail: requires budget >= 1000");
    const models::PreparedModel prepared(model, cap);
    const BlockAccum total = run_blocks(budget, workers, [&](std::uint64_t i, BlockAccum& acc) {
        RandomStream stream = seeds.stream_for(i);
        const models::Replication rep = prepared(stream);
        if (rep.z > x) ++acc.hits;
        if (rep.capped) ++acc.capped;
        acc.work += rep.work;
    });
    TailEstimate est;
    est.replications = budget;
    est.method = "naive";
    const double r = double(budget);
    est.p_hat = double(total.hits) / r;
    est.std_error = std::sqrt(std::max(0.0, est.p_hat * (1.0 - est.p_hat)) / r);
    est.capped_fraction = double(total.capped) / r;
    est.mean_work = double(total.work) / r;
    return est;
}

double bigjump_is_weight(std::uint64_t n, std::uint64_t count_above, double tail_at_threshold,
                         double mix_p) {
    const double boost = mix_p * double(count_above) / (double(n) * tail_at_threshold);
    return 1.0 / ((1.0 - mix_p) + boost);
}

TailEstimate estimate_tail_bigjump_is(const models::SumModel& model, double x,
                                      std::uint64_t budget, const SeedSpec& seeds, double mix_p,
                                      int workers) {
    require(budget >= 1000, "estimate_tail_bigjump_is: requires budget >= 1000");
    if (!(mix_p > 0.0 && mix_p < 1.0))
        throw std::domain_error("estimate_tail_bigjump_is: mix_p must lie in (0, 1)");
    if (model.kind != models::ModelKind::iid)
        throw UnsupportedError("estimate_tail_bigjump_is: iid models only");
    const std::uint64_t n = model.n;
    const double threshold = 0.5 * x;
    const double tail_c = laws::tail(model.law, threshold);
    require(tail_c > 0.0, "estimate_tail_bigjump_is: boost threshold beyond the law's support");
    const laws::FastSampler sampler(model.law);
    const double center = models::centering_constant(model);
    const BlockAccum total = run_blocks(budget, workers, [&](std::uint64_t i, BlockAccum& acc) {
        RandomStream stream = seeds.stream_for(i);
        const bool boosted = stream.next_unit() < mix_p;
        std::uint64_t jstar = 0;
        if (boosted) {
            jstar = std::uint64_t(stream.next_unit() * double(n));
            if (jstar >= n) jstar = n - 1;
        }
        double sum = 0.0;
        std::uint64_t above = 0;
        for (std::uint64_t j = 0; j < n; ++j) {
            const double v = (boosted && j == jstar)
                                 ? laws::tail_inverse(model.law, stream.next_unit() * tail_c)
                                 : sampler(stream);
            if (v > threshold) ++above;
            sum += v;
        }
        acc.work += n;
        if (sum - center > x) {
            const double w = bigjump_is_weight(n, above, tail_c, mix_p);
            ++acc.hits;
            acc.sum_w += w;
            acc.sum_w2 += w * w;
        }
    });
    TailEstimate est;
    est.replications = budget;
    est.method = "bigjump_is";
    const double r = double(budget);
    est.p_hat = total.sum_w / r;
    const double var = std::max(0.0, (total.sum_w2 - total.sum_w * total.sum_w / r) / (r - 1.0));
    est.std_error = std::sqrt(var / r);
    est.capped_fraction = 0.0;
    est.mean_work = double(total.work) / r;
    return est;
}

double expected_work_per_replication(const models::SumModel& model, std::uint64_t cap) {
    switch (model.kind) {
        case models::ModelKind::iid:
        case models::ModelKind::weighted:
            return double(model.n);
        case models::ModelKind::stopped:
            return counting::mean_count_capped(model.counting, model.t, cap);
    }
    return 0.0;
}

void check_run_feasible(const models::SumModel& model, double x, std::uint64_t budget,
                        std::uint64_t cap) {
    const double per_rep = expected_work_per_replication(model, cap);
    if (per_rep > 64.0 * double(budget))
        throw OutOfRegimeError(
            strf("expected work per replication %.4g exceeds 64 * budget = %.4g; "
                 "shrink the horizon or raise the budget",
                 per_rep, 64.0 * double(budget)));
    if (model.kind == models::ModelKind::stopped && models::counting_mean_is_infinite(model)) {
        const double beta = models::tail_index(model);
        const double n_star =
            beta < 1.0 ? 1.0 / laws::tail(model.law, x) : x / laws::mean(model.law);
        if (n_star > double(cap) / 100.0)
            throw OutOfRegimeError(
                strf("event count scale %.4g exceeds cap/100 = %.4g; the count cap would "
                     "bias the tail estimate at this level",
                     n_star, double(cap) / 100.0));
    }
}

std::vector<ConvergenceRow> convergence_table(
    const std::function<models::SumModel(double)>& model_family,
    const std::function<double(double)>& x_rule, const std::vector<double>& indices,
    std::uint64_t budget, const SeedSpec& seeds, std::uint64_t cap, Method method, int workers,
    double mix_p) {
    require(static_cast<bool>(model_family), "convergence_table: model_family must be set");
    require(static_cast<bool>(x_rule), "convergence_table: x_rule must be set");
    require(!indices.empty(), "convergence_table: requires at least one index");
    std::vector<ConvergenceRow> rows;
    rows.reserve(indices.size());
    for (double index : indices) {
        const models::SumModel model = model_family(index);
        const double x = x_rule(index);
        const double ld = models::ld_condition(model, x);
        if (!(ld <= 0.05))
            throw OutOfRegimeError(
                strf("index %.6g: ld_condition = %.4g exceeds 0.05; the big-jump "
                     "prediction is not valid there",
                     index, ld));
        check_run_feasible(model, x, budget, cap);
        const auto t0 = std::chrono::steady_clock::now();
        const TailEstimate est = method == Method::naive
                                     ? estimate_tail(model, x, budget, seeds, cap, workers)
                                     : estimate_tail_bigjump_is(model, x, budget, seeds, mix_p,
                                                                workers);
        const auto t1 = std::chrono::steady_clock::now();
        const predict::Prediction pred = predict::predict_for(model, x);
        ConvergenceRow row;
        row.index = index;
        row.x = x;
        row.p_hat = est.p_hat;
        row.std_error = est.std_error;
        row.prediction = pred.value;
        row.ratio =
            pred.value > 0.0 ? est.p_hat / pred.value : std::numeric_limits<double>::quiet_NaN();
        row.ld_condition = ld;
        row.method = est.method;
        row.replications = est.replications;
        row.capped_fraction = est.capped_fraction;
        row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ldp::mc
