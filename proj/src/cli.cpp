#include "pqmt/cli.hpp"

#include "pqmt/classifier.hpp"
#include "pqmt/dataio.hpp"
#include "pqmt/experiments.hpp"
#include "pqmt/reservoir.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

namespace pqmt::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Schemas

FieldSpec number_field(double default_value, double min = -1e308, double max = 1e308) {
    return FieldSpec{FieldType::number, json(default_value), min, max, {}};
}
FieldSpec integer_field(long long default_value, double min = -1e308,
                        double max = 1e308) {
    return FieldSpec{FieldType::integer, json(default_value), min, max, {}};
}
FieldSpec boolean_field(bool default_value) {
    return FieldSpec{FieldType::boolean, json(default_value), 0, 0, {}};
}
FieldSpec string_field(const std::string& default_value,
                       std::vector<std::string> allowed = {}) {
    return FieldSpec{FieldType::string, json(default_value), 0, 0, std::move(allowed)};
}
FieldSpec number_array_field(std::vector<double> default_value, double min = -1e308,
                             double max = 1e308) {
    return FieldSpec{FieldType::number_array, json(default_value), min, max, {}};
}
FieldSpec integer_array_field(std::vector<int> default_value, double min = -1e308,
                              double max = 1e308) {
    return FieldSpec{FieldType::integer_array, json(default_value), min, max, {}};
}

void add_drive_fields(Schema& schema, double default_ratio) {
    schema["drive.tau_ratio"] = number_field(default_ratio, 1e-9, 1e6);
    schema["drive.tau_osc"] = number_field(1.0, 1e-12, 1e12);
    schema["drive.steps_per_cycle"] = integer_field(400, 2, 1000000);
    schema["drive.transient_cycles"] = integer_field(4, 1, 1024);
    schema["drive.max_cycles"] = integer_field(32, 1, 4096);
    schema["drive.steady_tol"] = number_field(1e-6, 0.0, 1.0);
}

void add_network_fields(Schema& schema) {
    schema["network.size"] = integer_field(4, 2, 64);
    schema["network.n_max"] = number_field(2.0, 1e-12, 1e6);
    // p = -1 selects the size-derived inflection point.
    schema["network.p"] = number_field(-1.0, -1.0, 1.0);
    schema["network.d"] = number_field(10.0, 0.0, 1e3);
    schema["network.order"] =
        string_field("update-first", {"update-first", "transmit-first"});
}

void add_data_fields(Schema& schema) {
    schema["data.source"] = string_field("synthetic", {"synthetic", "idx"});
    schema["data.classes"] = integer_array_field({0, 1, 2}, 0, 255);
    schema["data.seed"] = integer_field(7, 0);
}

void add_reservoir_fields(Schema& schema, bool with_d) {
    schema["reservoir.modes"] = integer_field(9, 1, 16);
    schema["reservoir.photon_bound"] = integer_field(3, 1, 6);
    schema["reservoir.n_max"] = number_field(3.0, 1e-12, 1e6);
    schema["reservoir.epsilon"] = number_field(1e-8, 1e-300, 1.0);
    schema["reservoir.p"] = number_field(-1.0, -1.0, 1.0);
    schema["reservoir.window"] = integer_field(6, 1, 1024);
    schema["reservoir.seed_u1"] = integer_field(1, 0);
    schema["reservoir.seed_u2"] = integer_field(2, 0);
    schema["reservoir.reset_per_image"] = boolean_field(true);
    schema["reservoir.freeze_readout"] = boolean_field(true);
    if (with_d) schema["reservoir.d"] = number_field(10.0, 0.0, 1e3);
}

Schema make_device_schema() {
    Schema schema;
    add_drive_fields(schema, 0.3);
    schema["device.n_max"] = number_field(1.0, 1e-12, 1e6);
    schema["device.p"] = number_field(0.5, 0.0, 1.0);
    schema["device.d"] = number_field(10.0, 0.0, 1e3);
    schema["device.ne_levels"] = number_array_field({0.0, 0.5, 1.0}, 0.0, 1.0);
    schema["device.order"] =
        string_field("update-first", {"update-first", "transmit-first"});
    return schema;
}

Schema make_network_schema() {
    Schema schema;
    add_drive_fields(schema, 0.7);
    add_network_fields(schema);
    schema["drive.pair_i"] = integer_array_field({0, 0, 0, 0}, 0, 2);
    schema["drive.pair_j"] = integer_array_field({0, 0, 1, 1}, 0, 2);
    return schema;
}

Schema make_ensemble_schema() {
    Schema schema;
    add_drive_fields(schema, 0.7);
    add_network_fields(schema);
    schema["drive.tau_ratios"] = number_array_field({0.6, 0.7, 0.8, 0.9}, 1e-9, 1e6);
    schema["ensemble.include_vacuum_pairs"] = boolean_field(true);
    schema.erase("drive.tau_ratio");  // ratios are swept
    return schema;
}

Schema make_marginal_schema() {
    Schema schema;
    add_drive_fields(schema, 0.7);
    add_network_fields(schema);
    return schema;
}

Schema make_reservoir_schema() {
    Schema schema;
    add_data_fields(schema);
    schema["data.images_path"] = string_field("");
    schema["data.labels_path"] = string_field("");
    schema["data.per_class"] = integer_field(10, 1, 100000);
    add_reservoir_fields(schema, true);
    return schema;
}

Schema make_train_schema() {
    Schema schema;
    add_data_fields(schema);
    schema["data.train_images_path"] = string_field("");
    schema["data.train_labels_path"] = string_field("");
    schema["data.test_images_path"] = string_field("");
    schema["data.test_labels_path"] = string_field("");
    schema["data.train_per_class"] = integer_field(300, 1, 100000);
    schema["data.test_per_class"] = integer_field(150, 1, 100000);
    add_reservoir_fields(schema, false);
    schema["sweep.d_values"] = number_array_field({0.0, 2.0, 5.0, 10.0}, 0.0, 1e3);
    schema["classifier.epochs"] = integer_field(100, 1, 100000);
    schema["classifier.learning_rate"] = number_field(0.05, 0.0, 1e3);
    schema["classifier.batch_size"] = integer_field(256, 1, 1000000);
    schema["classifier.beta1"] = number_field(0.9, 0.0, 1.0);
    schema["classifier.beta2"] = number_field(0.999, 0.0, 1.0);
    schema["classifier.eps"] = number_field(1e-8, 1e-300, 1.0);
    schema["classifier.seed"] = integer_field(0, 0);
    return schema;
}

const std::map<std::string, Schema>& schema_table() {
    static const std::map<std::string, Schema> table = {
        {"device-hysteresis", make_device_schema()},
        {"network-hysteresis", make_network_schema()},
        {"ensemble", make_ensemble_schema()},
        {"marginal", make_marginal_schema()},
        {"reservoir", make_reservoir_schema()},
        {"train", make_train_schema()},
    };
    return table;
}

// ---------------------------------------------------------------------------
// Validation

void flatten(const json& node, const std::string& prefix,
             std::map<std::string, json>& out) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            std::string path = prefix.empty() ? key : prefix + "." + key;
            flatten(value, path, out);
        }
    } else {
        out[prefix] = node;
    }
}

void check_range(const std::string& key, double value, const FieldSpec& spec) {
    if (value < spec.min || value > spec.max) {
        std::ostringstream msg;
        msg << "config key \"" << key << "\": value " << value << " outside ["
            << spec.min << ", " << spec.max << "]";
        throw ConfigError(msg.str());
    }
}

void check_value(const std::string& key, const json& value, const FieldSpec& spec) {
    switch (spec.type) {
        case FieldType::number:
            if (!value.is_number())
                throw ConfigError("config key \"" + key + "\": expected a number");
            check_range(key, value.get<double>(), spec);
            break;
        case FieldType::integer:
            if (!value.is_number_integer())
                throw ConfigError("config key \"" + key + "\": expected an integer");
            check_range(key, value.get<double>(), spec);
            break;
        case FieldType::boolean:
            if (!value.is_boolean())
                throw ConfigError("config key \"" + key + "\": expected a boolean");
            break;
        case FieldType::string: {
            if (!value.is_string())
                throw ConfigError("config key \"" + key + "\": expected a string");
            if (!spec.allowed.empty() &&
                std::find(spec.allowed.begin(), spec.allowed.end(),
                          value.get<std::string>()) == spec.allowed.end())
                throw ConfigError("config key \"" + key + "\": value \"" +
                                  value.get<std::string>() + "\" not allowed");
            break;
        }
        case FieldType::number_array:
            if (!value.is_array())
                throw ConfigError("config key \"" + key + "\": expected an array");
            for (const auto& item : value) {
                if (!item.is_number())
                    throw ConfigError("config key \"" + key +
                                      "\": expected numeric elements");
                check_range(key, item.get<double>(), spec);
            }
            break;
        case FieldType::integer_array:
            if (!value.is_array())
                throw ConfigError("config key \"" + key + "\": expected an array");
            for (const auto& item : value) {
                if (!item.is_number_integer())
                    throw ConfigError("config key \"" + key +
                                      "\": expected integer elements");
                check_range(key, item.get<double>(), spec);
            }
            break;
    }
}

void set_path(json& root, const std::string& path, const json& value) {
    json* node = &root;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = path.find('.', start);
        std::string part = path.substr(start, dot - start);
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

const json* find_path(const json& root, const std::string& path) {
    const json* node = &root;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = path.find('.', start);
        std::string part = path.substr(start, dot - start);
        auto it = node->find(part);
        if (it == node->end()) return nullptr;
        node = &*it;
        if (dot == std::string::npos) return node;
        start = dot + 1;
    }
}

const json& require_path(const json& config, const std::string& path) {
    const json* node = find_path(config, path);
    if (!node) throw ConfigError("missing config key \"" + path + "\"");
    return *node;
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {
        "device-hysteresis", "network-hysteresis", "ensemble",
        "marginal",          "reservoir",          "train"};
    return names;
}

const Schema& schema_for(const std::string& subcommand) {
    auto it = schema_table().find(subcommand);
    if (it == schema_table().end())
        throw ConfigError("unknown subcommand \"" + subcommand + "\"");
    return it->second;
}

json validate_config(const json& raw, const Schema& schema) {
    if (!raw.is_object() && !raw.is_null())
        throw ConfigError("config root must be a JSON object");
    std::map<std::string, json> flat;
    if (raw.is_object()) flatten(raw, "", flat);

    for (const auto& [key, value] : flat) {
        auto it = schema.find(key);
        if (it == schema.end())
            throw ConfigError("unknown config key \"" + key + "\"");
        check_value(key, value, it->second);
    }
    json resolved = json::object();
    for (const auto& [key, spec] : schema) {
        auto it = flat.find(key);
        if (it != flat.end()) {
            set_path(resolved, key, it->second);
        } else if (spec.default_value.is_null()) {
            throw ConfigError("missing required config key \"" + key + "\"");
        } else {
            set_path(resolved, key, spec.default_value);
        }
    }
    return resolved;
}

void apply_override(json& raw, const std::string& assignment) {
    std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key=value, got \"" + assignment + "\"");
    std::string key = assignment.substr(0, eq);
    std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;  // bare strings are fine
    if (!raw.is_object()) raw = json::object();
    set_path(raw, key, value);
}

double get_number(const json& config, const std::string& path) {
    const json& v = require_path(config, path);
    if (!v.is_number()) throw ConfigError("config key \"" + path + "\" is not a number");
    return v.get<double>();
}
long long get_integer(const json& config, const std::string& path) {
    const json& v = require_path(config, path);
    if (!v.is_number_integer())
        throw ConfigError("config key \"" + path + "\" is not an integer");
    return v.get<long long>();
}
bool get_boolean(const json& config, const std::string& path) {
    const json& v = require_path(config, path);
    if (!v.is_boolean()) throw ConfigError("config key \"" + path + "\" is not a boolean");
    return v.get<bool>();
}
std::string get_string(const json& config, const std::string& path) {
    const json& v = require_path(config, path);
    if (!v.is_string()) throw ConfigError("config key \"" + path + "\" is not a string");
    return v.get<std::string>();
}
std::vector<double> get_numbers(const json& config, const std::string& path) {
    const json& v = require_path(config, path);
    if (!v.is_array()) throw ConfigError("config key \"" + path + "\" is not an array");
    return v.get<std::vector<double>>();
}
std::vector<int> get_integers(const json& config, const std::string& path) {
    const json& v = require_path(config, path);
    if (!v.is_array()) throw ConfigError("config key \"" + path + "\" is not an array");
    return v.get<std::vector<int>>();
}

// ---------------------------------------------------------------------------
// Runners

namespace {

UpdateOrder order_from(const std::string& text) {
    return text == "transmit-first" ? UpdateOrder::transmit_then_update
                                    : UpdateOrder::update_then_transmit;
}

HysteresisSettings drive_settings(const json& config) {
    HysteresisSettings settings;
    if (find_path(config, "drive.tau_ratio"))
        settings.tau_ratio = get_number(config, "drive.tau_ratio");
    settings.tau_osc = get_number(config, "drive.tau_osc");
    settings.steps_per_cycle = static_cast<int>(get_integer(config, "drive.steps_per_cycle"));
    settings.transient_cycles =
        static_cast<int>(get_integer(config, "drive.transient_cycles"));
    settings.max_cycles = static_cast<int>(get_integer(config, "drive.max_cycles"));
    settings.steady_tol = get_number(config, "drive.steady_tol");
    return settings;
}

HysteresisSettings network_settings(const json& config) {
    HysteresisSettings settings = drive_settings(config);
    settings.n_max = get_number(config, "network.n_max");
    double p = get_number(config, "network.p");
    settings.p = p < 0.0 ? std::nan("") : p;
    settings.d = get_number(config, "network.d");
    settings.order = order_from(get_string(config, "network.order"));
    return settings;
}

std::string occupation_string(const Occupation& occ) {
    std::string out;
    for (int n : occ) out += static_cast<char>('0' + n);
    return out;
}

std::string fmt(double value) { return format_double(value); }

template <class Record>
std::vector<const Record*> last_cycle(const std::vector<Record>& records) {
    int last = 0;
    for (const auto& r : records) last = std::max(last, r.cycle);
    std::vector<const Record*> out;
    for (const auto& r : records)
        if (r.cycle == last) out.push_back(&r);
    return out;
}

void run_device_cmd(const json& config, const std::string& out_dir) {
    HysteresisSettings settings = drive_settings(config);
    settings.n_max = get_number(config, "device.n_max");
    settings.p = get_number(config, "device.p");
    settings.d = get_number(config, "device.d");
    settings.order = order_from(get_string(config, "device.order"));
    std::vector<double> levels = get_numbers(config, "device.ne_levels");

    auto results = run_device_hysteresis(settings, levels);
    std::vector<std::vector<std::string>> area_rows;
    for (const auto& result : results) {
        std::vector<std::vector<std::string>> rows;
        for (const DeviceRecord* r : last_cycle(result.records))
            rows.push_back({fmt(r->time), fmt(r->n_in), fmt(r->n_out), fmt(r->gamma_in),
                            fmt(r->gamma_out), r->first_half ? "1" : "0"});
        write_csv(out_dir + "/ne" + fmt(result.ne_level) + ".csv",
                  {"t", "nA", "nC", "gammaA", "gammaC", "halfcycle"}, rows);
        area_rows.push_back(
            {fmt(result.ne_level), fmt(result.area_photon), fmt(result.area_coherence)});
    }
    write_csv(out_dir + "/areas.csv", {"ne_level", "S_n", "S_gamma"}, area_rows);
}

void run_network_cmd(const json& config, const std::string& out_dir) {
    HysteresisSettings settings = network_settings(config);
    const int size = static_cast<int>(get_integer(config, "network.size"));
    std::vector<int> pair_i = get_integers(config, "drive.pair_i");
    std::vector<int> pair_j = get_integers(config, "drive.pair_j");
    if (static_cast<int>(pair_i.size()) != size ||
        static_cast<int>(pair_j.size()) != size)
        throw ConfigError("drive.pair_i / drive.pair_j must have network.size entries");

    auto result = run_network_hysteresis(size, settings, pair_i, pair_j);
    std::vector<std::vector<std::string>> rows;
    for (const StepRecord* r : last_cycle(result.records))
        rows.push_back({fmt(r->time), fmt(r->gamma_in), fmt(r->gamma_out),
                        r->first_half ? "1" : "0"});
    write_csv(out_dir + "/curve.csv", {"t", "gamma_in", "gamma_out", "halfcycle"}, rows);
    write_csv(out_dir + "/areas.csv", {"state_i", "state_j", "S_gamma"},
              {{occupation_string(result.state_i), occupation_string(result.state_j),
                fmt(result.area)}});
}

void run_ensemble_cmd(const json& config, const std::string& out_dir, int jobs) {
    HysteresisSettings settings = network_settings(config);
    const int size = static_cast<int>(get_integer(config, "network.size"));
    std::vector<double> ratios = get_numbers(config, "drive.tau_ratios");
    bool include_vacuum = get_boolean(config, "ensemble.include_vacuum_pairs");

    auto results = run_ensemble(size, settings, ratios, include_vacuum, jobs);
    std::vector<std::vector<std::string>> rows, mean_rows;
    for (const auto& result : results) {
        for (const auto& realization : result.realizations)
            rows.push_back({fmt(result.tau_ratio), occupation_string(realization.state_i),
                            occupation_string(realization.state_j),
                            fmt(realization.area)});
        mean_rows.push_back({fmt(result.tau_ratio), fmt(result.mean_area)});
    }
    write_csv(out_dir + "/realizations.csv",
              {"ratio", "realization_i", "realization_j", "S_gamma"}, rows);
    write_csv(out_dir + "/means.csv", {"ratio", "mean_S_gamma"}, mean_rows);
}

void run_marginal_cmd(const json& config, const std::string& out_dir) {
    HysteresisSettings settings = network_settings(config);
    const int size = static_cast<int>(get_integer(config, "network.size"));
    std::vector<Occupation> states = ensemble_states(size);

    // S is symmetric in the drive pair, so cache per unordered pair.
    std::map<std::pair<int, int>, double> cache;
    auto area_of = [&](int i, int j) {
        auto key = std::minmax(i, j);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double area =
            run_network_hysteresis(size, settings, states[key.first], states[key.second])
                .area;
        cache.emplace(key, area);
        return area;
    };

    std::vector<std::vector<std::string>> rows;
    for (int i = 1; i < static_cast<int>(states.size()); ++i) {  // skip the vacuum
        double sum = 0.0;
        int count = 0;
        for (int j = 0; j < static_cast<int>(states.size()); ++j) {
            if (j == i) continue;
            sum += area_of(i, j);
            ++count;
        }
        rows.push_back({occupation_string(states[i]), fmt(sum / count)});
    }
    write_csv(out_dir + "/marginals.csv", {"state_i", "mean_S_gamma"}, rows);
}

ReservoirConfig reservoir_config(const json& config, double d_value) {
    ReservoirConfig rc;
    rc.modes = static_cast<int>(get_integer(config, "reservoir.modes"));
    rc.photon_bound = static_cast<int>(get_integer(config, "reservoir.photon_bound"));
    rc.n_max = get_number(config, "reservoir.n_max");
    rc.epsilon = get_number(config, "reservoir.epsilon");
    double p = get_number(config, "reservoir.p");
    rc.p = p < 0.0 ? std::nan("") : p;
    rc.window = static_cast<int>(get_integer(config, "reservoir.window"));
    rc.seed_u1 = static_cast<std::uint64_t>(get_integer(config, "reservoir.seed_u1"));
    rc.seed_u2 = static_cast<std::uint64_t>(get_integer(config, "reservoir.seed_u2"));
    rc.reset_per_image = get_boolean(config, "reservoir.reset_per_image");
    rc.freeze_readout = get_boolean(config, "reservoir.freeze_readout");
    rc.d = d_value;
    return rc;
}

Dataset take_per_class(const Dataset& dataset, int per_class, int classes) {
    Dataset out;
    out.split = dataset.split;
    std::vector<int> counts(classes, 0);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        int label = dataset.labels[i];
        if (label < classes && counts[label] < per_class) {
            out.images.push_back(dataset.images[i]);
            out.labels.push_back(label);
            ++counts[label];
        }
    }
    return out;
}

Dataset load_split(const json& config, const std::string& images_key,
                   const std::string& labels_key, int per_class,
                   std::uint64_t synthetic_seed) {
    std::vector<int> classes = get_integers(config, "data.classes");
    if (get_string(config, "data.source") == "synthetic")
        return make_synthetic(static_cast<int>(classes.size()), per_class,
                              synthetic_seed);
    std::string images_path = get_string(config, images_key);
    std::string labels_path = get_string(config, labels_key);
    if (images_path.empty() || labels_path.empty())
        throw ConfigError("config keys \"" + images_key + "\"/\"" + labels_key +
                          "\" are required when data.source is \"idx\"");
    Dataset full = subset_classes(load_idx(images_path, labels_path), classes);
    return take_per_class(full, per_class, static_cast<int>(classes.size()));
}

std::uint64_t basis_map_hash(const FockBasis& basis) {
    std::uint64_t hash = 1469598103934665603ull;  // FNV-1a
    auto mix = [&](std::uint64_t byte) {
        hash ^= byte;
        hash *= 1099511628211ull;
    };
    for (const auto& occ : basis.occupations())
        for (int n : occ) mix(static_cast<std::uint64_t>(n) + 1);
    return hash;
}

Eigen::MatrixXd feature_matrix(const std::vector<ImageResult>& results) {
    Eigen::MatrixXd out(results.size(), results.empty() ? 0 : results[0].features.size());
    for (std::size_t i = 0; i < results.size(); ++i)
        for (std::size_t k = 0; k < results[i].features.size(); ++k)
            out(static_cast<int>(i), static_cast<int>(k)) = results[i].features[k];
    return out;
}

void run_reservoir_cmd(const json& config, const std::string& out_dir, int jobs) {
    ReservoirConfig rc = reservoir_config(config, get_number(config, "reservoir.d"));
    Dataset data = load_split(config, "data.images_path", "data.labels_path",
                              static_cast<int>(get_integer(config, "data.per_class")),
                              static_cast<std::uint64_t>(get_integer(config, "data.seed")));
    Reservoir reservoir(rc);
    auto results = reservoir.run_dataset(data.images, data.labels, jobs);

    std::vector<std::string> header = {"label"};
    for (int q = 1; q <= rc.modes; ++q) header.push_back("T" + std::to_string(q));
    for (int f = 1; f <= reservoir.basis().size(); ++f)
        header.push_back("f" + std::to_string(f));
    std::vector<std::vector<std::string>> rows;
    std::vector<std::vector<double>> t_vectors;
    for (const auto& result : results) {
        std::vector<std::string> row = {std::to_string(result.label)};
        for (double t : result.transmittance) row.push_back(fmt(t));
        for (double f : result.features) row.push_back(fmt(f));
        rows.push_back(std::move(row));
        t_vectors.push_back(result.transmittance);
    }
    write_csv(out_dir + "/features.csv", header, rows);

    std::vector<double> lt = separability(t_vectors);
    std::vector<std::vector<std::string>> lt_rows;
    for (std::size_t i = 0; i < lt.size(); ++i)
        lt_rows.push_back({std::to_string(i), fmt(lt[i])});
    write_csv(out_dir + "/separability.csv", {"image", "L_T"}, lt_rows);

    json sidecar = {{"config", config},
                    {"basis_map_hash", basis_map_hash(reservoir.basis())},
                    {"basis_size", reservoir.basis().size()}};
    write_json(out_dir + "/reservoir_metadata.json", sidecar);
}

void run_train_cmd(const json& config, const std::string& out_dir, int jobs) {
    std::vector<int> classes = get_integers(config, "data.classes");
    const int class_count = static_cast<int>(classes.size());
    const auto seed = static_cast<std::uint64_t>(get_integer(config, "data.seed"));
    Dataset train_data =
        load_split(config, "data.train_images_path", "data.train_labels_path",
                   static_cast<int>(get_integer(config, "data.train_per_class")), seed);
    Dataset test_data =
        load_split(config, "data.test_images_path", "data.test_labels_path",
                   static_cast<int>(get_integer(config, "data.test_per_class")),
                   seed + 1);

    TrainConfig tc;
    tc.epochs = static_cast<int>(get_integer(config, "classifier.epochs"));
    tc.learning_rate = get_number(config, "classifier.learning_rate");
    tc.batch_size = static_cast<int>(get_integer(config, "classifier.batch_size"));
    tc.beta1 = get_number(config, "classifier.beta1");
    tc.beta2 = get_number(config, "classifier.beta2");
    tc.eps = get_number(config, "classifier.eps");
    tc.seed = static_cast<std::uint64_t>(get_integer(config, "classifier.seed"));

    std::vector<std::vector<std::string>> metric_rows, summary_rows;
    for (double d_value : get_numbers(config, "sweep.d_values")) {
        Reservoir reservoir(reservoir_config(config, d_value));
        auto train_results = reservoir.run_dataset(train_data.images, train_data.labels, jobs);
        auto test_results = reservoir.run_dataset(test_data.images, test_data.labels, jobs);
        Eigen::MatrixXd train_x = feature_matrix(train_results);
        Eigen::MatrixXd test_x = feature_matrix(test_results);

        auto trained = train(train_x, train_data.labels, class_count, tc, &test_x,
                             &test_data.labels);
        double acc_sum = 0.0, conf_sum = 0.0;
        const int tail = std::min<int>(5, static_cast<int>(trained.history.size()));
        for (const auto& m : trained.history) {
            metric_rows.push_back({fmt(d_value), std::to_string(m.epoch), fmt(m.loss),
                                   fmt(m.accuracy), fmt(m.confidence)});
            if (m.epoch >= tc.epochs - tail) {
                acc_sum += m.accuracy;
                conf_sum += m.confidence;
            }
        }
        double acc = acc_sum / tail, conf = conf_sum / tail;
        summary_rows.push_back({fmt(d_value), fmt(acc), fmt(conf), fmt(acc * conf)});
    }
    write_csv(out_dir + "/metrics.csv", {"d", "epoch", "loss", "accuracy", "confidence"},
              metric_rows);
    write_csv(out_dir + "/summary.csv",
              {"d", "accuracy", "confidence", "accuracy_x_confidence"}, summary_rows);
}

}  // namespace

int run_subcommand(const std::string& name, const json& resolved,
                   const std::string& out_dir, int jobs) {
    namespace fs = std::filesystem;
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    write_json(out_dir + "/resolved_config.json", resolved);

    if (name == "device-hysteresis") run_device_cmd(resolved, out_dir);
    else if (name == "network-hysteresis") run_network_cmd(resolved, out_dir);
    else if (name == "ensemble") run_ensemble_cmd(resolved, out_dir, jobs);
    else if (name == "marginal") run_marginal_cmd(resolved, out_dir);
    else if (name == "reservoir") run_reservoir_cmd(resolved, out_dir, jobs);
    else if (name == "train") run_train_cmd(resolved, out_dir, jobs);
    else throw ConfigError("unknown subcommand \"" + name + "\"");

    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    write_json(out_dir + "/metadata.json", json{{"subcommand", name},
                                                {"version", "0.1.0"},
                                                {"jobs", jobs},
                                                {"wall_time_seconds", wall}});
    return 0;
}

}  // namespace pqmt::cli
