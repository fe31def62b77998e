#include "pqmt/experiments.hpp"

#include "pqmt/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pqmt {

MemParams HysteresisSettings::mem_params(double resolved_p_value) const {
    MemParams params;
    params.tau_int = tau_ratio * tau_osc;
    params.dt = tau_osc / steps_per_cycle;
    params.n_max = n_max;
    params.p = resolved_p_value;
    params.d = d;
    return params;
}

double HysteresisSettings::resolved_p(int network_size) const {
    return std::isnan(p) ? inflection_point(network_size) : p;
}

PureState device_drive_state(double t, double tau_osc, double ne_level,
                             const BasisPtr& basis) {
    if (!(ne_level >= 0.0 && ne_level <= 1.0))
        throw std::invalid_argument("device_drive_state: nE level outside [0,1]");
    if (basis->modes() != 2 || basis->photon_bound() < 2)
        throw std::invalid_argument("device_drive_state: need a 2-mode basis, bound >= 2");
    const double phase = M_PI * t / tau_osc;
    Vector amps = Vector::Zero(basis->size());
    const double ca = std::cos(phase), sa = std::sin(phase);
    const double g0 = std::sqrt(1.0 - ne_level), g1 = std::sqrt(ne_level);
    amps(basis->index_of({0, 0})) = ca * g0;
    amps(basis->index_of({0, 1})) = ca * g1;
    amps(basis->index_of({1, 0})) = sa * g0;
    amps(basis->index_of({1, 1})) = sa * g1;
    return PureState{basis, std::move(amps)};
}

namespace {

// Max |last cycle - previous cycle| across the given observables, relative to
// the last cycle's observable range.
template <class Record, class... Getter>
bool last_two_cycles_agree(const std::vector<Record>& records, int steps_per_cycle,
                           double tol, Getter... getters) {
    const int total = static_cast<int>(records.size());
    if (total < 2 * steps_per_cycle) return false;
    bool ok = true;
    auto check = [&](auto getter) {
        double max_diff = 0.0, lo = 1e300, hi = -1e300;
        for (int k = 0; k < steps_per_cycle; ++k) {
            double prev = getter(records[total - 2 * steps_per_cycle + k]);
            double last = getter(records[total - steps_per_cycle + k]);
            max_diff = std::max(max_diff, std::abs(last - prev));
            lo = std::min(lo, last);
            hi = std::max(hi, last);
        }
        double range = std::max(hi - lo, 1e-12);
        if (max_diff > tol * range) ok = false;
    };
    (check(getters), ...);
    return ok;
}

std::vector<DeviceRecord> run_device_once(const HysteresisSettings& settings,
                                          double ne_level, int cycles) {
    const double resolved_p = std::isnan(settings.p) ? 0.5 : settings.p;
    MemParams params = settings.mem_params(resolved_p);
    PqmtUnit unit(params);
    BasisPtr basis = FockBasis::make(2, 2);
    const int spc = settings.steps_per_cycle;
    const double dt = settings.tau_osc / spc;
    std::vector<DeviceRecord> records;
    records.reserve(static_cast<std::size_t>(cycles) * spc);
    for (int c = 0; c < cycles; ++c) {
        for (int k = 0; k < spc; ++k) {
            const double t = (static_cast<double>(c) * spc + k) * dt;
            PureState psi = device_drive_state(t, settings.tau_osc, ne_level, basis);
            auto [rho_c, rec] = device_step(unit, pure_to_mixed(psi), settings.order);
            rec.time = t;
            rec.cycle = c;
            rec.first_half = k < spc / 2;
            records.push_back(rec);
        }
    }
    return records;
}

}  // namespace

std::vector<DeviceRecord> run_device_periodic(const HysteresisSettings& settings,
                                              double ne_level) {
    int cycles = settings.transient_cycles + 1;
    while (true) {
        auto records = run_device_once(settings, ne_level, cycles);
        bool steady = last_two_cycles_agree(
            records, settings.steps_per_cycle, settings.steady_tol,
            [](const DeviceRecord& r) { return r.n_out; },
            [](const DeviceRecord& r) { return r.gamma_out; });
        if (steady || cycles >= settings.max_cycles) return records;
        cycles = std::min(settings.max_cycles, cycles * 2);
    }
}

std::vector<DeviceHysteresis> run_device_hysteresis(const HysteresisSettings& settings,
                                                    std::span<const double> ne_levels) {
    std::vector<DeviceHysteresis> out;
    for (double level : ne_levels) {
        DeviceHysteresis result;
        result.ne_level = level;
        result.records = run_device_periodic(settings, level);
        result.photon_curve = curve_from_records(
            result.records, [](const DeviceRecord& r) { return r.n_in; },
            [](const DeviceRecord& r) { return r.n_out; });
        result.coherence_curve = curve_from_records(
            result.records, [](const DeviceRecord& r) { return r.gamma_in; },
            [](const DeviceRecord& r) { return r.gamma_out; });
        result.area_photon = loop_area(result.photon_curve);
        result.area_coherence = loop_area(result.coherence_curve);
        out.push_back(std::move(result));
    }
    return out;
}

namespace {

std::vector<StepRecord> run_network_once(int network_size,
                                         const HysteresisSettings& settings,
                                         const PureState& state_i,
                                         const PureState& state_j, int cycles) {
    MemParams params = settings.mem_params(settings.resolved_p(network_size));
    PqmtNetwork net(network_size, params, settings.order);
    auto drive = [&](double t) {
        const double phase = M_PI * t / settings.tau_osc;
        PureState psi{state_i.basis, std::cos(phase) * state_i.amplitudes +
                                         std::sin(phase) * state_j.amplitudes};
        return psi;
    };
    return run_periodic(net, drive, settings.tau_osc, cycles, settings.steps_per_cycle);
}

}  // namespace

NetworkHysteresis run_network_hysteresis(int network_size,
                                         const HysteresisSettings& settings,
                                         const Occupation& state_i,
                                         const Occupation& state_j) {
    if (state_i == state_j)
        throw std::invalid_argument("run_network_hysteresis: need distinct drive states");
    BasisPtr basis = FockBasis::make(network_size, 2);
    PureState psi_i = PureState::fock(basis, state_i);
    PureState psi_j = PureState::fock(basis, state_j);

    NetworkHysteresis result;
    result.state_i = state_i;
    result.state_j = state_j;
    int cycles = settings.transient_cycles + 1;
    while (true) {
        result.records = run_network_once(network_size, settings, psi_i, psi_j, cycles);
        bool steady = last_two_cycles_agree(
            result.records, settings.steps_per_cycle, settings.steady_tol,
            [](const StepRecord& r) { return r.gamma_out; });
        if (steady || cycles >= settings.max_cycles) break;
        cycles = std::min(settings.max_cycles, cycles * 2);
    }
    result.curve = curve_from_records(
        result.records, [](const StepRecord& r) { return r.gamma_in; },
        [](const StepRecord& r) { return r.gamma_out; });
    result.area = loop_area(result.curve);
    return result;
}

std::vector<Occupation> ensemble_states(int network_size) {
    BasisPtr basis = FockBasis::make(network_size, 2);
    return basis->occupations();
}

std::vector<EnsembleResult> run_ensemble(int network_size,
                                         const HysteresisSettings& settings,
                                         std::span<const double> tau_ratios,
                                         bool include_vacuum_pairs, int jobs) {
    if (network_size < 2)
        throw std::invalid_argument("run_ensemble: network size must be >= 2");
    std::vector<Occupation> states = ensemble_states(network_size);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < static_cast<int>(states.size()); ++i)
        for (int j = i + 1; j < static_cast<int>(states.size()); ++j) {
            if (!include_vacuum_pairs && i == 0) continue;  // index 0 is the vacuum
            pairs.emplace_back(i, j);
        }

    std::vector<EnsembleResult> out;
    for (double ratio : tau_ratios) {
        HysteresisSettings per_ratio = settings;
        per_ratio.tau_ratio = ratio;
        EnsembleResult result;
        result.tau_ratio = ratio;
        result.realizations.resize(pairs.size());

        auto worker = [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k) {
                auto [i, j] = pairs[k];
                auto run = run_network_hysteresis(network_size, per_ratio,
                                                  states[i], states[j]);
                result.realizations[k] =
                    EnsembleRealization{states[i], states[j], run.area};
            }
        };
        const int thread_count = std::max(1, jobs);
        if (thread_count == 1) {
            worker(0, pairs.size());
        } else {
            std::vector<std::thread> threads;
            const std::size_t chunk =
                (pairs.size() + thread_count - 1) / thread_count;
            for (int t = 0; t < thread_count; ++t) {
                std::size_t begin = std::min(pairs.size(), t * chunk);
                std::size_t end = std::min(pairs.size(), begin + chunk);
                if (begin < end) threads.emplace_back(worker, begin, end);
            }
            for (auto& th : threads) th.join();
        }

        double sum = 0.0;
        for (const auto& r : result.realizations) sum += r.area;
        result.mean_area = result.realizations.empty()
                               ? 0.0
                               : sum / static_cast<double>(result.realizations.size());
        out.push_back(std::move(result));
    }
    return out;
}

double marginal_hysteresis(const Occupation& state_i,
                           const HysteresisSettings& settings, int network_size) {
    bool vacuum = std::all_of(state_i.begin(), state_i.end(),
                              [](int n) { return n == 0; });
    if (vacuum)
        throw std::invalid_argument("marginal_hysteresis: vacuum |i> is excluded");
    std::vector<Occupation> states = ensemble_states(network_size);
    double sum = 0.0;
    int count = 0;
    for (const auto& state_j : states) {
        if (state_j == state_i) continue;
        sum += run_network_hysteresis(network_size, settings, state_i, state_j).area;
        ++count;
    }
    return sum / count;
}

}  // namespace pqmt
