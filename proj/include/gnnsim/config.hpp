#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gnnsim/graph.hpp"
#include "gnnsim/perf_model.hpp"
#include "gnnsim/simulator.hpp"
#include "gnnsim/types.hpp"

namespace gnnsim {

// Flat sectioned key-value configuration ("[section]" headers, "key = value"
// lines, '#' comments, bracketed comma lists). Later files merged on top
// override earlier ones key by key.
class ConfigFile {
  public:
    void set(const std::string& section, const std::string& key,
             const std::string& value);
    void merge_from(const ConfigFile& other);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           std::optional<std::string> fallback = {}) const;
    double get_double(const std::string& section, const std::string& key,
                      std::optional<double> fallback = {}) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::optional<std::uint64_t> fallback = {}) const;
    bool get_bool(const std::string& section, const std::string& key,
                  std::optional<bool> fallback = {}) const;
    std::vector<std::uint64_t> get_u64_list(const std::string& section,
                                            const std::string& key) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections()
        const {
        return sections_;
    }

  private:
    const std::string* find(const std::string& section,
                            const std::string& key) const;
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

ConfigFile parse_config_file(const std::string& path);

// How the input graph is obtained.
struct GraphSpec {
    enum class Source { Synthetic, EdgeList };
    Source source = Source::Synthetic;

    SyntheticKind kind = SyntheticKind::PowerLaw;
    std::uint64_t vertices = 100000;
    std::uint64_t avg_degree = 16;
    double skew = 1.8;
    std::uint64_t seed = 1;

    std::string edge_list_path;
    Directedness directedness = Directedness::Directed;

    double train_fraction = 0.1;
    std::uint64_t train_seed = 1;
    std::size_t feature_dim = 0;  // 0 means model.dims[0]
    bool materialize_features = false;
    std::uint64_t feature_seed = 1;
};

Graph build_graph(const GraphSpec& spec, const GnnModel& model);

// Everything a CLI run needs, merged from one or more config files.
struct RunConfig {
    PlatformMeta platform;
    ResourceCoeffs coeffs = ResourceCoeffs::u250_defaults();
    GnnModel model;
    GraphSpec graph;
    SimConfig sim;
    AcceleratorConfig accel{2, 512};  // per die
    std::uint32_t dse_profile_batches = 8;
    bool dse_exhaustive = false;
};

RunConfig assemble_run_config(const ConfigFile& cfg);

}  // namespace gnnsim
