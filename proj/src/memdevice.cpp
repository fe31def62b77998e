#include "pqmt/memdevice.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace pqmt {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

int MemParams::window() const {
    return std::max(1, static_cast<int>(std::llround(tau_int / dt)));
}

void MemParams::validate() const {
    if (!(tau_int > 0.0)) throw std::invalid_argument("MemParams: tau_int must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("MemParams: dt must be > 0");
    if (!(n_max > 0.0)) throw std::invalid_argument("MemParams: n_max must be > 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("MemParams: p must be in [0,1]");
    if (!(d >= 0.0)) throw std::invalid_argument("MemParams: d must be >= 0");
}

HistoryBuffer::HistoryBuffer(int window, double initial_na, double initial_ne) {
    if (window < 1) throw std::invalid_argument("HistoryBuffer: window must be >= 1");
    samples_.assign(window, {initial_na, initial_ne});
}

void HistoryBuffer::push(double na, double ne) {
    samples_[head_] = {na, ne};
    head_ = (head_ + 1) % static_cast<int>(samples_.size());
}

void HistoryBuffer::fill(double na, double ne) {
    samples_.assign(samples_.size(), {na, ne});
    head_ = 0;
}

std::vector<std::pair<double, double>> HistoryBuffer::chronological() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(samples_.size());
    for (std::size_t k = 0; k < samples_.size(); ++k)
        out.push_back(samples_[(head_ + k) % samples_.size()]);
    return out;
}

std::pair<double, double> HistoryBuffer::last() const {
    int idx = (head_ + static_cast<int>(samples_.size()) - 1) %
              static_cast<int>(samples_.size());
    return samples_[idx];
}

double pqmr_transmittance(std::span<const double> na_history, double n_max) {
    if (na_history.empty())
        throw std::invalid_argument("pqmr_transmittance: empty history");
    double acc = 0.0;
    for (double na : na_history)
        acc += 0.5 - std::clamp(na, 0.0, n_max) / n_max;
    return clamp01(0.5 + acc / static_cast<double>(na_history.size()));
}

double history_map(std::span<const std::pair<double, double>> history, double n_max) {
    if (history.empty()) throw std::invalid_argument("history_map: empty history");
    double acc = 0.0;
    for (auto [na, ne] : history) {
        double ua = std::clamp(na, 0.0, n_max) / n_max;
        double ue = std::clamp(ne, 0.0, n_max) / n_max;
        acc += 0.5 - std::sqrt(ua * (1.0 - ue));
    }
    return clamp01(0.5 + acc / static_cast<double>(history.size()));
}

double gate_function(double x, double p, double d) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("gate_function: x outside [0,1]");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("gate_function: p outside [0,1]");
    if (!(d >= 0.0)) throw std::invalid_argument("gate_function: d must be >= 0");
    // Denominator 2e^{dp} - e^{2dp-d} is positive whenever e^{d(p-1)} < 2,
    // guaranteed for p <= 1.
    const double denom = 2.0 * std::exp(d * p) - std::exp(2.0 * d * p - d);
    assert(denom > 0.0);
    const double a1 = 1.0 / denom;
    if (x < p) return a1 * std::exp(d * x);
    const double a2 = 2.0 * std::exp(d * p) * a1;
    const double a3 = std::exp(2.0 * d * p) * a1;
    return a2 - a3 * std::exp(-d * x);
}

double pqmt_transmittance(const HistoryBuffer& history, const MemParams& params) {
    std::vector<double> na;
    na.reserve(history.samples().size());
    for (auto [a, e] : history.samples()) na.push_back(a);
    double pqmr = pqmr_transmittance(na, params.n_max);
    double x = history_map(history.samples(), params.n_max);
    return clamp01(pqmr * gate_function(x, params.p, params.d));
}

double inflection_point(int network_size) {
    if (network_size < 1)
        throw std::invalid_argument("inflection_point: network size must be >= 1");
    double inv = 1.0 / network_size;
    return 1.0 - std::sqrt(inv * (1.0 - inv));
}

double infer_input_photons(double nd, double transmittance) {
    if (!(transmittance >= 0.0 && transmittance < 1.0))
        throw std::invalid_argument(
            "infer_input_photons: requires 0 <= T < 1 (T = 1 sends nothing to D)");
    return nd / (1.0 - transmittance);
}

PqmtUnit::PqmtUnit(const MemParams& params)
    : params_(params),
      history_(params.window(), params.n_max / 2.0, params.n_max) {
    params_.validate();
    recompute();
}

void PqmtUnit::step(double na, double ne) {
    if (std::isnan(na) || std::isnan(ne))
        throw std::invalid_argument("PqmtUnit::step: NaN sample");
    history_.push(std::clamp(na, 0.0, params_.n_max),
                  std::clamp(ne, 0.0, params_.n_max));
    recompute();
}

void PqmtUnit::reset() {
    history_.fill(params_.n_max / 2.0, params_.n_max);
    recompute();
}

double PqmtUnit::pqmr_component() const {
    std::vector<double> na;
    na.reserve(history_.samples().size());
    for (auto [a, e] : history_.samples()) na.push_back(a);
    return pqmr_transmittance(na, params_.n_max);
}

void PqmtUnit::recompute() {
    transmittance_ = pqmt_transmittance(history_, params_);
    theta_ = 2.0 * std::acos(std::sqrt(transmittance_));
}

}  // namespace pqmt
