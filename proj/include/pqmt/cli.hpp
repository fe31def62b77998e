#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pqmt::cli {

/// Config problems exit with code 2; runtime failures with 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FieldType { number, integer, boolean, string, number_array, integer_array };

struct FieldSpec {
    FieldType type;
    nlohmann::json default_value;  // null means required
    double min = -1e308;
    double max = 1e308;
    std::vector<std::string> allowed;  // for strings, empty = any
};

/// Dot-path keyed flat schema, e.g. "device.n_max".
using Schema = std::map<std::string, FieldSpec>;

const std::vector<std::string>& subcommands();
const Schema& schema_for(const std::string& subcommand);  // throws ConfigError

/// Full check of a raw config against the schema: unknown keys rejected,
/// types and ranges enforced, defaults filled. Returns the resolved nested
/// config with every key explicit.
nlohmann::json validate_config(const nlohmann::json& raw, const Schema& schema);

/// Apply a --set key=value override onto the raw config; the value is parsed
/// as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& raw, const std::string& assignment);

/// Navigation helpers over a resolved config.
double get_number(const nlohmann::json& config, const std::string& path);
long long get_integer(const nlohmann::json& config, const std::string& path);
bool get_boolean(const nlohmann::json& config, const std::string& path);
std::string get_string(const nlohmann::json& config, const std::string& path);
std::vector<double> get_numbers(const nlohmann::json& config, const std::string& path);
std::vector<int> get_integers(const nlohmann::json& config, const std::string& path);

/// Run one experiment into the output directory (created if needed); writes
/// the resolved config, CSVs, and a metadata sidecar. Returns the exit code.
int run_subcommand(const std::string& name, const nlohmann::json& resolved,
                   const std::string& out_dir, int jobs);

}  // namespace pqmt::cli
