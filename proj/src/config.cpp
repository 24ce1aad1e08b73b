#include "gnnsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gnnsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

std::string field(const std::string& section, const std::string& key) {
    return "[" + section + "] " + key;
}

}  // namespace

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
    sections_[section][key] = value;
}

void ConfigFile::merge_from(const ConfigFile& other) {
    for (const auto& [section, kv] : other.sections_)
        for (const auto& [key, value] : kv) sections_[section][key] = value;
}

const std::string* ConfigFile::find(const std::string& section,
                                    const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   std::optional<std::string> fallback) const {
    const std::string* v = find(section, key);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError(field(section, key) + ": missing");
    }
    return unquote(*v);
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key,
                              std::optional<double> fallback) const {
    const std::string* v = find(section, key);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError(field(section, key) + ": missing");
    }
    try {
        std::size_t pos = 0;
        double d = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(field(section, key) + ": expected a number, got \"" +
                          *v + "\"");
    }
}

std::uint64_t ConfigFile::get_u64(const std::string& section,
                                  const std::string& key,
                                  std::optional<std::uint64_t> fallback) const {
    const std::string* v = find(section, key);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError(field(section, key) + ": missing");
    }
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || p != v->data() + v->size())
        throw ConfigError(field(section, key) +
                          ": expected a non-negative integer, got \"" + *v +
                          "\"");
    return out;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          std::optional<bool> fallback) const {
    const std::string* v = find(section, key);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError(field(section, key) + ": missing");
    }
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(field(section, key) + ": expected true/false, got \"" +
                      *v + "\"");
}

std::vector<std::uint64_t> ConfigFile::get_u64_list(
    const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) throw ConfigError(field(section, key) + ": missing");
    std::string body = trim(*v);
    if (!body.empty() && body.front() == '[' && body.back() == ']')
        body = body.substr(1, body.size() - 2);
    std::vector<std::uint64_t> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::uint64_t x = 0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
        if (ec != std::errc{} || p != item.data() + item.size())
            throw ConfigError(field(section, key) + ": bad list entry \"" +
                              item + "\"");
        out.push_back(x);
    }
    if (out.empty())
        throw ConfigError(field(section, key) + ": empty list");
    return out;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    ConfigFile cfg;
    std::string line;
    std::string section = "global";
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": empty key or value");
        cfg.set(section, key, value);
    }
    return cfg;
}

Graph build_graph(const GraphSpec& spec, const GnnModel& model) {
    Graph g;
    if (spec.source == GraphSpec::Source::Synthetic) {
        g = generate_synthetic(spec.kind, spec.vertices, spec.avg_degree,
                               spec.skew, spec.seed);
    } else {
        g = load_edge_list(spec.edge_list_path, spec.directedness);
    }
    assign_train_mask(g, spec.train_fraction, spec.train_seed);
    const std::size_t dim =
        spec.feature_dim ? spec.feature_dim : model.input_dim();
    if (spec.materialize_features) {
        attach_random_features(g, dim, spec.feature_seed);
    } else {
        g.feature_dim = dim;
    }
    return g;
}

RunConfig assemble_run_config(const ConfigFile& cfg) {
    RunConfig run;

    auto& p = run.platform;
    p.fpga_count = static_cast<std::uint32_t>(cfg.get_u64("platform", "fpgas", 4));
    p.dies_per_fpga =
        static_cast<std::uint32_t>(cfg.get_u64("platform", "dies_per_fpga", 4));
    p.die.n_dsp = cfg.get_double("platform", "dsp_per_die", 3072);
    p.die.n_lut = cfg.get_double("platform", "lut_per_die", 423000);
    p.die.ddr_bw = cfg.get_double("platform", "ddr_gbps_per_die", 19.25) * 1e9;
    p.freq_hz = cfg.get_double("platform", "freq_mhz", 300) * 1e6;
    p.pcie_link_bw = cfg.get_double("platform", "pcie_gbps", 16) * 1e9;
    p.cpu_mem_bw = cfg.get_double("platform", "cpu_mem_gbps", 205) * 1e9;
    p.sampler_rate = cfg.get_double("platform", "sampler_meps", 25) * 1e6;
    p.s_feat = cfg.get_double("platform", "s_feat_bytes", 4);
    p.validate();

    if (cfg.has("coeffs", "lambda1")) {
        run.coeffs.lambda1 = cfg.get_double("coeffs", "lambda1");
        run.coeffs.lambda2 = cfg.get_double("coeffs", "lambda2");
        run.coeffs.rho1 = cfg.get_double("coeffs", "rho1");
        run.coeffs.rho2 = cfg.get_double("coeffs", "rho2");
        run.coeffs.rho3 = cfg.get_double("coeffs", "rho3");
    }

    auto& m = run.model;
    m.num_layers = cfg.get_u64("model", "layers", 2);
    if (cfg.has("model", "dims")) {
        auto dims = cfg.get_u64_list("model", "dims");
        m.dims.assign(dims.begin(), dims.end());
    } else {
        m.dims = {100, 128, 47};
    }
    if (cfg.has("model", "fanouts")) {
        auto fanouts = cfg.get_u64_list("model", "fanouts");
        m.fanouts.assign(fanouts.begin(), fanouts.end());
    } else {
        m.fanouts = {25, 10};
    }
    m.batch_targets = cfg.get_u64("model", "batch_targets", 1024);
    std::string agg = cfg.get_string("model", "aggregator", std::string("mean"));
    if (agg == "sum")
        m.aggregator = Aggregator::Sum;
    else if (agg == "mean")
        m.aggregator = Aggregator::Mean;
    else
        throw ConfigError("[model] aggregator: expected sum or mean");
    std::string kind = cfg.get_string("model", "kind", std::string("graphsage"));
    if (kind == "gcn")
        m.kind = ModelKind::Gcn;
    else if (kind == "graphsage")
        m.kind = ModelKind::GraphSage;
    else if (kind == "custom")
        m.kind = ModelKind::Custom;
    else
        throw ConfigError("[model] kind: expected gcn, graphsage or custom");
    m.bp_cost_factor = cfg.get_double("model", "bp_cost_factor", 1.0);
    m.validate();

    auto& gs = run.graph;
    std::string source = cfg.get_string("graph", "source", std::string("synthetic"));
    if (source == "synthetic")
        gs.source = GraphSpec::Source::Synthetic;
    else if (source == "edge_list")
        gs.source = GraphSpec::Source::EdgeList;
    else
        throw ConfigError("[graph] source: expected synthetic or edge_list");
    std::string gkind = cfg.get_string("graph", "kind", std::string("power_law"));
    if (gkind == "uniform")
        gs.kind = SyntheticKind::Uniform;
    else if (gkind == "power_law")
        gs.kind = SyntheticKind::PowerLaw;
    else
        throw ConfigError("[graph] kind: expected uniform or power_law");
    gs.vertices = cfg.get_u64("graph", "vertices", 100000);
    gs.avg_degree = cfg.get_u64("graph", "avg_degree", 16);
    gs.skew = cfg.get_double("graph", "skew", 1.8);
    gs.seed = cfg.get_u64("graph", "seed", 1);
    gs.edge_list_path = cfg.get_string("graph", "path", std::string(""));
    gs.directedness = cfg.get_bool("graph", "directed", true)
                          ? Directedness::Directed
                          : Directedness::Undirected;
    gs.train_fraction = cfg.get_double("graph", "train_fraction", 0.1);
    gs.train_seed = cfg.get_u64("graph", "train_seed", 1);
    gs.feature_dim = cfg.get_u64("graph", "feature_dim", 0);
    gs.materialize_features = cfg.get_bool("graph", "materialize_features", false);
    gs.feature_seed = cfg.get_u64("graph", "feature_seed", 1);
    if (gs.source == GraphSpec::Source::EdgeList && gs.edge_list_path.empty())
        throw ConfigError("[graph] path: required when source = edge_list");

    auto& s = run.sim;
    std::string algo = cfg.get_string("sim", "algorithm", std::string("distdgl"));
    if (algo == "distdgl")
        s.algorithm = Algorithm::DistDgl;
    else if (algo == "pagraph")
        s.algorithm = Algorithm::PaGraph;
    else if (algo == "p3")
        s.algorithm = Algorithm::P3;
    else
        throw ConfigError("[sim] algorithm: expected distdgl, pagraph or p3");
    s.workload_balance = cfg.get_bool("sim", "workload_balance", true);
    s.direct_cpu_fetch = cfg.get_bool("sim", "direct_cpu_fetch", true);
    s.epochs = static_cast<std::uint32_t>(cfg.get_u64("sim", "epochs", 1));
    s.seed = cfg.get_u64("sim", "seed", 7);
    s.cache_capacity_bytes = cfg.get_u64("sim", "cache_capacity_bytes", 0);
    s.shared_sampler = cfg.get_bool("sim", "shared_sampler", false);
    s.extras_consume_quota = cfg.get_bool("sim", "extras_consume_quota", true);

    run.accel.n = static_cast<std::uint32_t>(cfg.get_u64("accelerator", "n_per_die", 2));
    run.accel.m = static_cast<std::uint32_t>(cfg.get_u64("accelerator", "m_per_die", 512));

    run.dse_profile_batches =
        static_cast<std::uint32_t>(cfg.get_u64("dse", "profile_batches", 8));
    run.dse_exhaustive = cfg.get_bool("dse", "exhaustive", false);
    return run;
}

}  // namespace gnnsim
