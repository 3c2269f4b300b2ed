#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "laddr/knowledge_base.hpp"
#include "laddr/supervisor.hpp"
#include "laddr/types.hpp"

namespace laddr {

// Desk-scale loss-of-flow surrogate: one primary coolant pump ramps down
// linearly while a second pump partially compensates; plenum and fuel
// centerline temperatures follow first-order lags toward a heat-balance
// steady state. The constants below are documented defaults tuned for
// qualitative shape (monotone flow decrease, temperature rise), not plant
// ground truth.

struct TransientProfile {
    double nominal_speed = 1.0; // pre-transient pump speed (normalized)
    double ramp_duration = 467.81;
    double end_fraction = 1.0; // final speed as a fraction of nominal
    double start_time = 0.0;
    size_t steps = 2000; // samples per transient

    void validate() const;
};

// Linear ramp from nominal at start_time to nominal*end_fraction at
// start_time + ramp_duration; held constant outside the window.
double pump_speed(double t, const TransientProfile& profile);

struct SurrogateParams {
    double primary_weight = 0.7;  // ramping pump's share of total flow
    double compensation = 0.5;    // second pump speeds up by this fraction of the deficit
    double inlet_temp = 0.3;      // surrogate units
    double plenum_heat = 0.35;    // plenum steady state: inlet + heat/flow
    double fuel_heat = 0.6;       // fuel steady state: inlet + heat/flow^exponent
    double fuel_flow_exponent = 2.0; // centerline heat-up grows superlinearly as flow drops
    double plenum_lag = 30.0;     // seconds; the plenum tracks quickly
    double fuel_lag = 250.0;      // the centerline lags hard, so its value depends on
                                  // history and not on the instantaneous inputs alone
    double flow_floor = 0.05;     // clamp, flagged when hit
};

struct PlantState {
    double time = 0.0;
    double pump_speed = 0.0;
    double core_flow = 0.0;
    double up_temp = 0.0;
    double fcl_temp = 0.0;
};

struct TransientResult {
    std::vector<PlantState> states;
    bool flow_clamped = false;
};

// Fixed-step explicit integration with dt = ramp_duration / steps; starts
// from equilibrium at nominal speed. Requires dt < lag/2 for both lags.
TransientResult simulate_transient(const TransientProfile& profile,
                                   const SurrogateParams& params);

struct StudyConfig {
    uint64_t seed = 2024;
    size_t d1_episodes = 64;
    size_t d2_episodes = 16;
    size_t steps = 200;
    double ramp_duration = 467.81;
    std::pair<double, double> d1_end_range{0.516, 1.0};
    std::pair<double, double> d2_end_range{0.0, 0.387};
    double train_fraction = 0.10; // share of d1 episodes forming the train split
    // optional per-episode ramp-duration variation (disabled by default)
    std::optional<std::pair<double, double>> ramp_duration_range;
    SurrogateParams surrogate;

    void validate() const;
};

struct Episode {
    size_t index = 0; // within its split
    TransientProfile profile;
    std::vector<PlantState> states; // observables rescaled to study units
};

// Columns of the emitted datasets, in order.
inline const std::vector<std::string> kStudyColumns = {
    "episode", "time", "pump_speed", "up_temp", "core_flow", "t_fcl"};

struct StudyDatasets {
    Schema schema; // up_temp, core_flow inputs; t_fcl target
    std::vector<Episode> d1_train;
    std::vector<Episode> d1_test;
    std::vector<Episode> d2_test;
    // observable bounds used to rescale the corpus (from the d1 family, so
    // the d2 family lands outside [0,1] where it genuinely extrapolates)
    std::vector<double> scale_min; // up_temp, core_flow, fcl_temp
    std::vector<double> scale_max;

    // flattened (up_temp, core_flow, t_fcl) rows for a split
    std::vector<std::vector<double>> feature_rows(const std::vector<Episode>& split) const;
    // full provenance rows matching kStudyColumns
    std::vector<std::vector<double>> provenance_rows(const std::vector<Episode>& split) const;
};

// Draws each episode's end fraction uniformly from its split's range (every
// value reproducible from seed + split + episode index alone), simulates,
// rescales, and splits d1 into train/test by episode.
StudyDatasets build_datasets(const StudyConfig& config);

// Deliberately low-capacity reference model: polynomial least squares on the
// input features, fit to the train split. Falls back to the target mean (and
// says so) when the normal equations are singular.
class PolynomialPredictor {
public:
    // rows = (inputs..., target); degree 1 or 2
    static PolynomialPredictor fit(const std::vector<std::vector<double>>& rows,
                                   unsigned degree = 1);

    double operator()(std::span<const double> raw_inputs) const;
    PredictorPort port() const;

    bool used_mean_fallback() const { return mean_fallback_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    unsigned degree() const { return degree_; }

private:
    unsigned degree_ = 1;
    size_t n_inputs_ = 0;
    bool mean_fallback_ = false;
    std::vector<double> coefficients_;

    std::vector<double> basis(std::span<const double> x) const;
};

} // namespace laddr
