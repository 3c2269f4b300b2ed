#include "laddr/casestudy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "laddr/errors.hpp"
#include "laddr/random.hpp"

namespace laddr {

void TransientProfile::validate() const {
    if (!(nominal_speed > 0.0) || !std::isfinite(nominal_speed))
        throw ValidationError("profile: nominal speed must be finite and > 0");
    if (!(ramp_duration > 0.0) || !std::isfinite(ramp_duration))
        throw ValidationError("profile: ramp duration must be finite and > 0");
    if (!(end_fraction >= 0.0 && end_fraction <= 1.0))
        throw ValidationError("profile: end fraction must lie in [0,1]");
    if (!std::isfinite(start_time)) throw ValidationError("profile: non-finite start time");
    if (steps < 2) throw ValidationError("profile: at least 2 steps");
}

double pump_speed(double t, const TransientProfile& p) {
    p.validate();
    if (t <= p.start_time) return p.nominal_speed;
    if (t >= p.start_time + p.ramp_duration) return p.nominal_speed * p.end_fraction;
    return p.nominal_speed *
           (1.0 - ((1.0 - p.end_fraction) / p.ramp_duration) * (t - p.start_time));
}

namespace {

double total_flow(double primary_speed, const SurrogateParams& s, bool& clamped) {
    const double secondary = 1.0 + s.compensation * (1.0 - primary_speed);
    double flow = s.primary_weight * primary_speed + (1.0 - s.primary_weight) * secondary;
    if (flow < s.flow_floor) {
        flow = s.flow_floor;
        clamped = true;
    }
    return flow;
}

} // namespace

TransientResult simulate_transient(const TransientProfile& profile,
                                   const SurrogateParams& params) {
    profile.validate();
    if (!(params.primary_weight > 0.0 && params.primary_weight <= 1.0) ||
        params.compensation < 0.0 || !(params.plenum_lag > 0.0) || !(params.fuel_lag > 0.0) ||
        !(params.flow_floor > 0.0) || !(params.plenum_heat > 0.0) || !(params.fuel_heat > 0.0) ||
        !(params.fuel_flow_exponent > 0.0))
        throw ValidationError("simulate: bad surrogate parameters");
    const double dt = profile.ramp_duration / static_cast<double>(profile.steps);
    if (!(dt < params.plenum_lag / 2.0 && dt < params.fuel_lag / 2.0)) {
        std::ostringstream msg;
        msg << "simulate: time step " << dt
            << " too large for the lags (needs dt < lag/2); increase steps";
        throw ValidationError(msg.str());
    }

    TransientResult result;
    result.states.reserve(profile.steps);

    bool clamped = false;
    const double flow0 = total_flow(profile.nominal_speed, params, clamped);
    double up = params.inlet_temp + params.plenum_heat / flow0;
    double fcl = params.inlet_temp + params.fuel_heat / std::pow(flow0, params.fuel_flow_exponent);

    double t = profile.start_time;
    for (size_t k = 0; k < profile.steps; ++k) {
        const double speed_now = pump_speed(t, profile);
        const double flow_now = total_flow(speed_now, params, clamped);
        up += dt / params.plenum_lag * (params.inlet_temp + params.plenum_heat / flow_now - up);
        fcl += dt / params.fuel_lag *
               (params.inlet_temp + params.fuel_heat / std::pow(flow_now, params.fuel_flow_exponent) -
                fcl);
        t = profile.start_time + static_cast<double>(k + 1) * dt;

        PlantState state;
        state.time = t;
        state.pump_speed = pump_speed(t, profile);
        state.core_flow = total_flow(state.pump_speed, params, clamped);
        state.up_temp = up;
        state.fcl_temp = fcl;
        result.states.push_back(state);
    }
    result.flow_clamped = clamped;
    return result;
}

void StudyConfig::validate() const {
    if (d1_episodes == 0 || d2_episodes == 0)
        throw ValidationError("study: episode counts must be positive");
    if (steps < 2) throw ValidationError("study: at least 2 steps per episode");
    auto check_range = [](std::pair<double, double> r, const char* name) {
        if (!(r.first >= 0.0 && r.second <= 1.0 && r.first <= r.second))
            throw ValidationError(std::string("study: bad ") + name + " end-fraction range");
    };
    check_range(d1_end_range, "d1");
    check_range(d2_end_range, "d2");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ValidationError("study: train fraction must lie in (0,1)");
    if (!(ramp_duration > 0.0)) throw ValidationError("study: ramp duration must be > 0");
    if (ramp_duration_range && !(ramp_duration_range->first > 0.0 &&
                                 ramp_duration_range->second >= ramp_duration_range->first))
        throw ValidationError("study: bad ramp-duration range");
}

namespace {

constexpr uint64_t kSplitD1 = 1;
constexpr uint64_t kSplitD2 = 2;

TransientProfile episode_profile(const StudyConfig& cfg, uint64_t split, size_t index) {
    const auto range = split == kSplitD1 ? cfg.d1_end_range : cfg.d2_end_range;
    std::mt19937_64 rng(derive_seed(cfg.seed, split, index));
    TransientProfile p;
    p.ramp_duration = cfg.ramp_duration;
    p.end_fraction = uniform_in(rng, range.first, range.second);
    if (cfg.ramp_duration_range)
        p.ramp_duration =
            uniform_in(rng, cfg.ramp_duration_range->first, cfg.ramp_duration_range->second);
    p.steps = cfg.steps;
    return p;
}

} // namespace

std::vector<std::vector<double>> StudyDatasets::feature_rows(
    const std::vector<Episode>& split) const {
    std::vector<std::vector<double>> rows;
    for (const auto& ep : split)
        for (const auto& s : ep.states) rows.push_back({s.up_temp, s.core_flow, s.fcl_temp});
    return rows;
}

std::vector<std::vector<double>> StudyDatasets::provenance_rows(
    const std::vector<Episode>& split) const {
    std::vector<std::vector<double>> rows;
    for (const auto& ep : split)
        for (const auto& s : ep.states)
            rows.push_back({static_cast<double>(ep.index), s.time, s.pump_speed, s.up_temp,
                            s.core_flow, s.fcl_temp});
    return rows;
}

StudyDatasets build_datasets(const StudyConfig& config) {
    config.validate();

    auto simulate_split = [&](uint64_t split, size_t count) {
        std::vector<Episode> episodes(count);
        for (size_t i = 0; i < count; ++i) {
            episodes[i].index = i;
            episodes[i].profile = episode_profile(config, split, i);
            episodes[i].states = simulate_transient(episodes[i].profile, config.surrogate).states;
        }
        return episodes;
    };

    std::vector<Episode> d1 = simulate_split(kSplitD1, config.d1_episodes);
    std::vector<Episode> d2 = simulate_split(kSplitD2, config.d2_episodes);

    // study units: observables rescaled over the d1 family, so its corpus
    // spans [0,1] and the d2 family extrapolates beyond where it should
    std::vector<double> lo(3, std::numeric_limits<double>::infinity());
    std::vector<double> hi(3, -std::numeric_limits<double>::infinity());
    for (const auto& ep : d1)
        for (const auto& s : ep.states) {
            const double obs[3] = {s.up_temp, s.core_flow, s.fcl_temp};
            for (int c = 0; c < 3; ++c) {
                lo[c] = std::min(lo[c], obs[c]);
                hi[c] = std::max(hi[c], obs[c]);
            }
        }
    for (int c = 0; c < 3; ++c)
        if (!(hi[c] > lo[c]))
            throw NumericError("study: degenerate observable range; widen the end-fraction range");

    auto rescale = [&](std::vector<Episode>& split) {
        for (auto& ep : split)
            for (auto& s : ep.states) {
                s.up_temp = (s.up_temp - lo[0]) / (hi[0] - lo[0]);
                s.core_flow = (s.core_flow - lo[1]) / (hi[1] - lo[1]);
                s.fcl_temp = (s.fcl_temp - lo[2]) / (hi[2] - lo[2]);
            }
    };
    rescale(d1);
    rescale(d2);

    size_t train_count = static_cast<size_t>(
        std::lround(config.train_fraction * static_cast<double>(config.d1_episodes)));
    train_count = std::clamp<size_t>(train_count, 1, config.d1_episodes - 1);

    StudyDatasets out{Schema({{"up_temp", FeatureRole::Input},
                              {"core_flow", FeatureRole::Input},
                              {"t_fcl", FeatureRole::Target}}),
                      {},
                      {},
                      {},
                      std::move(lo),
                      std::move(hi)};
    // episode indices stay global within d1 so every point remains traceable
    // to (seed, split, episode, step)
    out.d1_train.assign(d1.begin(), d1.begin() + static_cast<ptrdiff_t>(train_count));
    out.d1_test.assign(d1.begin() + static_cast<ptrdiff_t>(train_count), d1.end());
    out.d2_test = std::move(d2);
    return out;
}

PolynomialPredictor PolynomialPredictor::fit(const std::vector<std::vector<double>>& rows,
                                             unsigned degree) {
    if (rows.empty()) throw ValidationError("predictor fit: empty training split");
    if (degree < 1 || degree > 2)
        throw ValidationError("predictor fit: degree must be 1 or 2");
    const size_t width = rows.front().size();
    if (width < 2) throw ValidationError("predictor fit: rows need inputs and a target");

    PolynomialPredictor p;
    p.degree_ = degree;
    p.n_inputs_ = width - 1;

    const size_t terms = p.basis(std::vector<double>(p.n_inputs_, 0.0)).size();
    std::vector<double> normal(terms * terms, 0.0); // X^T X
    std::vector<double> rhs(terms, 0.0);            // X^T y
    double target_sum = 0.0;
    for (const auto& row : rows) {
        if (row.size() != width) throw ValidationError("predictor fit: ragged rows");
        const std::vector<double> phi =
            p.basis(std::span<const double>(row.data(), p.n_inputs_));
        const double y = row.back();
        target_sum += y;
        for (size_t i = 0; i < terms; ++i) {
            rhs[i] += phi[i] * y;
            for (size_t j = 0; j < terms; ++j) normal[i * terms + j] += phi[i] * phi[j];
        }
    }

    // Gaussian elimination with partial pivoting on the normal equations
    std::vector<double> a = normal;
    std::vector<double> x = rhs;
    bool singular = false;
    std::vector<size_t> perm(terms);
    for (size_t i = 0; i < terms; ++i) perm[i] = i;
    for (size_t col = 0; col < terms && !singular; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < terms; ++r)
            if (std::abs(a[perm[r] * terms + col]) > std::abs(a[perm[pivot] * terms + col]))
                pivot = r;
        std::swap(perm[col], perm[pivot]);
        const double diag = a[perm[col] * terms + col];
        if (std::abs(diag) < 1e-12) {
            singular = true;
            break;
        }
        for (size_t r = col + 1; r < terms; ++r) {
            const double factor = a[perm[r] * terms + col] / diag;
            for (size_t c = col; c < terms; ++c)
                a[perm[r] * terms + c] -= factor * a[perm[col] * terms + c];
            x[perm[r]] -= factor * x[perm[col]];
        }
    }
    if (!singular) {
        p.coefficients_.assign(terms, 0.0);
        for (size_t col = terms; col-- > 0;) {
            double v = x[perm[col]];
            for (size_t c = col + 1; c < terms; ++c)
                v -= a[perm[col] * terms + c] * p.coefficients_[c];
            p.coefficients_[col] = v / a[perm[col] * terms + col];
            if (!std::isfinite(p.coefficients_[col])) {
                singular = true;
                break;
            }
        }
    }
    if (singular) {
        p.mean_fallback_ = true;
        p.coefficients_.assign(terms, 0.0);
        p.coefficients_[0] = target_sum / static_cast<double>(rows.size());
    }
    return p;
}

std::vector<double> PolynomialPredictor::basis(std::span<const double> x) const {
    std::vector<double> phi;
    phi.push_back(1.0);
    for (double v : x) phi.push_back(v);
    if (degree_ >= 2)
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = i; j < x.size(); ++j) phi.push_back(x[i] * x[j]);
    return phi;
}

double PolynomialPredictor::operator()(std::span<const double> raw_inputs) const {
    if (raw_inputs.size() != n_inputs_)
        throw ValidationError("predictor: input dimension mismatch");
    const std::vector<double> phi = basis(raw_inputs);
    double y = 0.0;
    for (size_t i = 0; i < phi.size(); ++i) y += coefficients_[i] * phi[i];
    return y;
}

PredictorPort PolynomialPredictor::port() const {
    PolynomialPredictor copy = *this;
    return [copy](std::span<const double> inputs) { return copy(inputs); };
}

} // namespace laddr
