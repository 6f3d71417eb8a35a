#include "reldelay/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "reldelay/errors.hpp"
#include "reldelay/lattice.hpp"

namespace reldelay {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value, std::size_t line)
{
    const char* begin = value.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(line, key, "expected a finite number, got '" + value + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value, std::size_t line)
{
    std::uint64_t v = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError(line, key, "expected a non-negative integer, got '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value, std::size_t line)
{
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(line, key, "expected true or false, got '" + value + "'");
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string{}) + field + ": " +
                         message),
      line_(line),
      field_(std::move(field))
{
}

double NetworkConfig::q() const
{
    return std::sqrt(g);
}

double NetworkConfig::resolved_lambda_L() const
{
    return lambda_L.value_or(kDefaultLambdaL);
}

double NetworkConfig::resolved_kappa() const
{
    return kappa.value_or(kDefaultKappa);
}

std::vector<double> lambda_sweep(double lo, double hi, double step)
{
    if (hi < lo) throw ParameterError("lambda sweep: max below min");
    if (hi == lo) return {lo};
    if (!(step > 0.0)) throw ParameterError("lambda sweep: step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
    return out;
}

std::vector<double> NetworkConfig::lambdas() const
{
    return lambda_sweep(lambda_min, lambda_max, lambda_step);
}

ModelParams NetworkConfig::model(double lambda) const
{
    ModelParams m;
    m.lambda = lambda;
    m.g = g;
    m.r0 = r0;
    m.lambda_L = resolved_lambda_L();
    m.kappa = resolved_kappa();
    return m;
}

SeriesControl NetworkConfig::series_control() const
{
    SeriesControl s;
    s.n_max = n_max > 0 ? n_max : build_lattice(region, r0).edge_count();
    s.tail_tol = tail_tol;
    s.policy = divergence_policy;
    return s;
}

std::size_t NetworkConfig::resolved_max_slots() const
{
    if (max_slots > 0) return max_slots;
    const double diameter_hops = std::ceil(std::hypot(region.width, region.height) / r0);
    return std::max<std::size_t>(1000, static_cast<std::size_t>(10.0 * diameter_hops));
}

void NetworkConfig::validate() const
{
    if (!(lambda_min >= 0.0)) throw ConfigError(0, "lambda_min", "must be non-negative");
    if (lambda_max < lambda_min) throw ConfigError(0, "lambda_max", "must not be below lambda_min");
    if (lambda_max > lambda_min && !(lambda_step > 0.0)) throw ConfigError(0, "lambda_step", "must be positive");
    if (!(g >= 0.0 && g <= 1.0)) throw ConfigError(0, "g", "must lie in [0, 1]");
    if (!(r0 > 0.0)) throw ConfigError(0, "r0", "must be positive");
    if (!(region.width > 0.0) || !(region.height > 0.0)) throw ConfigError(0, "region", "must be positive");
    if (!(tail_tol > 0.0)) throw ConfigError(0, "tail_tol", "must be positive");
    if (n_max == 1) throw ConfigError(0, "n_max", "must be 0 (automatic) or at least 2");
    if (lambda_L && !(*lambda_L > 0.0)) throw ConfigError(0, "lambda_L", "must be positive");
    if (kappa && !(*kappa > 0.0)) throw ConfigError(0, "kappa", "must be positive");
    if (jobs < 0) throw ConfigError(0, "jobs", "must be non-negative");
}

void apply_setting(NetworkConfig& cfg, const std::string& raw_key, const std::string& raw_value, std::size_t line)
{
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = trim(raw_value);

    if (key == "lambda") {
        cfg.lambda_min = cfg.lambda_max = parse_double(key, value, line);
    } else if (key == "lambda_min") {
        cfg.lambda_min = parse_double(key, value, line);
    } else if (key == "lambda_max") {
        cfg.lambda_max = parse_double(key, value, line);
    } else if (key == "lambda_step") {
        cfg.lambda_step = parse_double(key, value, line);
    } else if (key == "g") {
        cfg.g = parse_double(key, value, line);
        if (!(cfg.g >= 0.0 && cfg.g <= 1.0)) throw ConfigError(line, key, "must lie in [0, 1]");
    } else if (key == "q") {
        const double q = parse_double(key, value, line);
        if (!(q >= 0.0 && q <= 1.0)) throw ConfigError(line, key, "must lie in [0, 1]");
        cfg.g = q * q;
    } else if (key == "r0") {
        cfg.r0 = parse_double(key, value, line);
    } else if (key == "region") {
        const auto x = value.find_first_of("xX");
        if (x == std::string::npos) throw ConfigError(line, key, "expected WIDTHxHEIGHT, got '" + value + "'");
        cfg.region.width = parse_double(key, value.substr(0, x), line);
        cfg.region.height = parse_double(key, value.substr(x + 1), line);
    } else if (key == "origin_x") {
        cfg.region.origin.x = parse_double(key, value, line);
    } else if (key == "origin_y") {
        cfg.region.origin.y = parse_double(key, value, line);
    } else if (key == "max_slots") {
        cfg.max_slots = parse_unsigned(key, value, line);
    } else if (key == "pairs" || key == "n_random_pairs") {
        cfg.n_random_pairs = parse_unsigned(key, value, line);
    } else if (key == "repeats") {
        cfg.repeats = parse_unsigned(key, value, line);
    } else if (key == "trials") {
        cfg.trials = parse_unsigned(key, value, line);
    } else if (key == "seed") {
        cfg.seed = parse_unsigned(key, value, line);
    } else if (key == "n_max") {
        cfg.n_max = parse_unsigned(key, value, line);
    } else if (key == "tail_tol") {
        cfg.tail_tol = parse_double(key, value, line);
    } else if (key == "divergence_policy") {
        if (value == "error") {
            cfg.divergence_policy = DivergencePolicy::Error;
        } else if (value == "warn") {
            cfg.divergence_policy = DivergencePolicy::WarnAndTruncate;
        } else {
            throw ConfigError(line, key, "expected 'error' or 'warn', got '" + value + "'");
        }
    } else if (key == "kappa") {
        if (value.empty() || value == "auto") {
            cfg.kappa.reset();
        } else {
            cfg.kappa = parse_double(key, value, line);
        }
    } else if (key == "lambda_L" || key == "lambda_l") {
        if (value.empty() || value == "auto") {
            cfg.lambda_L.reset();
        } else {
            cfg.lambda_L = parse_double(key, value, line);
        }
    } else if (key == "occupancy") {
        if (value == "thinned") {
            cfg.occupancy = OccupancySource::Thinned;
        } else if (value == "raw") {
            cfg.occupancy = OccupancySource::Raw;
        } else {
            throw ConfigError(line, key, "expected 'thinned' or 'raw', got '" + value + "'");
        }
    } else if (key == "kappa_graph") {
        if (value == "longterm") {
            cfg.kappa_graph = KappaGraph::LongTerm;
        } else if (value == "slot") {
            cfg.kappa_graph = KappaGraph::SingleSlot;
        } else {
            throw ConfigError(line, key, "expected 'longterm' or 'slot', got '" + value + "'");
        }
    } else if (key == "redraw") {
        cfg.redraw = parse_bool(key, value, line);
    } else if (key == "jobs") {
        const auto j = parse_unsigned(key, value, line);
        if (j > 4096) throw ConfigError(line, key, "unreasonable worker count");
        cfg.jobs = static_cast<int>(j);
    } else if (key == "out") {
        cfg.out_dir = value;
    } else {
        throw ConfigError(line, key, "unknown setting");
    }
}

NetworkConfig parse_config(const std::string& text, NetworkConfig base)
{
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ConfigError(line, content, "expected key=value");
        const std::string key = trim(content.substr(0, eq));
        if (key.empty()) throw ConfigError(line, "<empty>", "missing key before '='");
        apply_setting(base, key, content.substr(eq + 1), line);
    }
    return base;
}

NetworkConfig load_config(const std::string& path, NetworkConfig base)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "config", "cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::string serialize_config(const NetworkConfig& cfg)
{
    std::ostringstream os;
    os << "lambda_min=" << format_double(cfg.lambda_min) << '\n'
       << "lambda_max=" << format_double(cfg.lambda_max) << '\n'
       << "lambda_step=" << format_double(cfg.lambda_step) << '\n'
       << "g=" << format_double(cfg.g) << '\n'
       << "r0=" << format_double(cfg.r0) << '\n'
       << "region=" << format_double(cfg.region.width) << 'x' << format_double(cfg.region.height) << '\n'
       << "origin_x=" << format_double(cfg.region.origin.x) << '\n'
       << "origin_y=" << format_double(cfg.region.origin.y) << '\n'
       << "max_slots=" << cfg.max_slots << '\n'
       << "pairs=" << cfg.n_random_pairs << '\n'
       << "repeats=" << cfg.repeats << '\n'
       << "trials=" << cfg.trials << '\n'
       << "seed=" << cfg.seed << '\n'
       << "n_max=" << cfg.n_max << '\n'
       << "tail_tol=" << format_double(cfg.tail_tol) << '\n'
       << "divergence_policy=" << (cfg.divergence_policy == DivergencePolicy::Error ? "error" : "warn") << '\n'
       << "kappa=" << (cfg.kappa ? format_double(*cfg.kappa) : std::string("auto")) << '\n'
       << "lambda_L=" << (cfg.lambda_L ? format_double(*cfg.lambda_L) : std::string("auto")) << '\n'
       << "occupancy=" << (cfg.occupancy == OccupancySource::Thinned ? "thinned" : "raw") << '\n'
       << "kappa_graph=" << (cfg.kappa_graph == KappaGraph::LongTerm ? "longterm" : "slot") << '\n'
       << "redraw=" << (cfg.redraw ? "true" : "false") << '\n'
       << "jobs=" << cfg.jobs << '\n'
       << "out=" << cfg.out_dir << '\n';
    return os.str();
}

}  // namespace reldelay
