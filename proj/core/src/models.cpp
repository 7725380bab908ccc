#include "ldp/models.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ldp/errors.hpp"

namespace ldp::models {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

bool law_is_heavy(const laws::IncrementLaw& law) {
    switch (law.kind) {
        case laws::LawKind::pareto:
        case laws::LawKind::pareto_log:
        case laws::LawKind::one_sided_stable:
            return true;
        default:
            return false;
    }
}

}  // namespace

SumModel SumModel::iid(laws::IncrementLaw law, std::uint64_t n) {
    require(n >= 1, "iid model: n must be >= 1");
    SumModel m;
    m.kind = ModelKind::iid;
    m.law = law;
    m.n = n;
    return m;
}

SumModel SumModel::weighted(laws::IncrementLaw law, kernels::MemoryKernel kernel,
                            std::uint64_t n) {
    require(n >= 1, "weighted model: n must be >= 1");
    if (!law_is_heavy(law))
        throw UnsupportedError("weighted model: requires a regularly varying increment law");
    SumModel m;
    m.kind = ModelKind::weighted;
    m.law = law;
    m.kernel = kernel;
    m.n = n;
    return m;
}

SumModel SumModel::stopped(laws::IncrementLaw law, counting::CountingSpec counting, double t) {
    require(t > 0.0, "stopped model: t must be > 0");
    if (!law_is_heavy(law))
        throw UnsupportedError("stopped model: requires a regularly varying increment law");
    SumModel m;
    m.kind = ModelKind::stopped;
    m.law = law;
    m.counting = std::move(counting);
    m.t = t;
    return m;
}

std::string SumModel::describe() const {
    char buf[256];
    switch (kind) {
        case ModelKind::iid:
            std::snprintf(buf, sizeof buf, "iid(%s, n=%llu)%s", law.describe().c_str(),
                          (unsigned long long)n, force_uncentered ? " uncentered" : "");
            break;
        case ModelKind::weighted:
            std::snprintf(buf, sizeof buf, "weighted(%s, %s, n=%llu)%s", law.describe().c_str(),
                          kernel.describe().c_str(), (unsigned long long)n,
                          force_uncentered ? " uncentered" : "");
            break;
        case ModelKind::stopped:
            std::snprintf(buf, sizeof buf, "stopped(%s, %s, t=%g)%s", law.describe().c_str(),
                          counting.describe().c_str(), t, force_uncentered ? " uncentered" : "");
            break;
    }
    return buf;
}

double tail_index(const SumModel& model) { return laws::lst_asymptotic(model.law).index; }

bool counting_mean_is_infinite(const SumModel& model) {
    require(model.kind == ModelKind::stopped, "counting_mean_is_infinite: stopped models only");
    return !counting::mean_count(model.counting, model.t).finite;
}

CenteringRule centering_rule(const SumModel& model) {
    if (model.force_uncentered) return CenteringRule::zero;
    if (!laws::has_finite_mean(model.law)) return CenteringRule::zero;
    if (tail_index(model) <= 1.0) return CenteringRule::zero;
    switch (model.kind) {
        case ModelKind::iid:
        case ModelKind::weighted:
            return CenteringRule::deterministic_mean;
        case ModelKind::stopped:
            if (counting_mean_is_infinite(model)) return CenteringRule::zero;
            return CenteringRule::random_mean;
    }
    return CenteringRule::zero;
}

double centering_constant(const SumModel& model) {
    switch (centering_rule(model)) {
        case CenteringRule::zero:
        case CenteringRule::random_mean:
            return 0.0;
        case CenteringRule::deterministic_mean: {
            const double mu = laws::mean(model.law);
            if (model.kind == ModelKind::iid) return mu * double(model.n);
            const auto w = kernels::weights(model.kernel, model.n);
            double acc = 0.0;
            for (double wj : w) acc += wj;
            return mu * acc;
        }
    }
    return 0.0;
}

double ld_condition(const SumModel& model, double x) {
    switch (model.kind) {
        case ModelKind::iid:
            return double(model.n) * laws::tail(model.law, x);
        case ModelKind::weighted: {
            const auto norming = kernels::ldp_norming(model.kernel, model.n, tail_index(model));
            return norming.L_n * laws::tail(model.law, x);
        }
        case ModelKind::stopped: {
            const auto mean = counting::mean_count(model.counting, model.t);
            if (mean.finite) return mean.value * laws::tail(model.law, x);
            const double beta = tail_index(model);
            double threshold;
            if (beta < 1.0) {
                threshold = 1.0 / laws::tail(model.law, x);
            } else {
                threshold = x / laws::mean(model.law);
            }
            if (threshold < 1.0) return 1.0;
            return counting::tail_count_asymptotic(model.counting, model.t, threshold);
        }
    }
    return 0.0;
}

PreparedModel::PreparedModel(const SumModel& model, std::uint64_t cap)
    : model_(model), cap_(cap), sampler_(model.law) {
    rule_ = centering_rule(model_);
    if (rule_ != CenteringRule::zero) mu_ = laws::mean(model_.law);
    if (rule_ == CenteringRule::deterministic_mean) fixed_center_ = centering_constant(model_);
    if (model_.kind == ModelKind::weighted) {
        weights_ = kernels::weights(model_.kernel, model_.n);
    }
    if (model_.kind == ModelKind::stopped) {
        if (model_.counting.kind == counting::CountKind::compound_renewal &&
            model_.counting.batch.kind == laws::BatchKind::zeta)
            laws::zeta_table_for(model_.counting.batch.gamma);
        if (model_.counting.kind == counting::CountKind::first_passage)
            counting::first_passage_survival(1);
    }
}

Replication PreparedModel::operator()(mc::RandomStream& rng) const {
    Replication rep;
    switch (model_.kind) {
        case ModelKind::iid: {
            double acc = 0.0;
            for (std::uint64_t i = 0; i < model_.n; ++i) acc += sampler_(rng);
            rep.z = acc - fixed_center_;
            rep.n_used = model_.n;
            rep.work = model_.n;
            return rep;
        }
        case ModelKind::weighted: {
            // Increment k = i+1 carries cumulative weight w_{n-k}.
            double acc = 0.0;
            for (std::uint64_t i = 0; i < model_.n; ++i)
                acc += weights_[model_.n - 1 - i] * sampler_(rng);
            rep.z = acc - fixed_center_;
            rep.n_used = model_.n;
            rep.work = model_.n;
            return rep;
        }
        case ModelKind::stopped: {
            const auto count = counting::sample_count(model_.counting, model_.t, cap_, rng);
            double acc = 0.0;
            for (std::uint64_t i = 0; i < count.n; ++i) acc += sampler_(rng);
            if (rule_ == CenteringRule::random_mean) acc -= mu_ * double(count.n);
            rep.z = acc;
            rep.n_used = count.n;
            rep.capped = count.capped;
            rep.work = count.n;
            return rep;
        }
    }
    return rep;
}

Replication sample_centered(const SumModel& model, mc::RandomStream& rng, std::uint64_t cap) {
    PreparedModel prepared(model, cap);
    return prepared(rng);
}

}  // namespace ldp::models
