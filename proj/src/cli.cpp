#include "fieldcomm/cli.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "fieldcomm/errors.hpp"
#include "fieldcomm/protocols.hpp"

namespace fieldcomm::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";
constexpr std::uint64_t kDefaultSeed = 20240607;
constexpr int kDefaultHaarSamples = 100;
constexpr std::size_t kMaxGridSize = 100000;

// Reads keys from a JSON object and rejects any it did not consume.
class Reader {
public:
    Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (!obj_.is_object()) {
            throw ValidationError(where_ + " must be a JSON object");
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return obj_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return obj_.at(key);
    }

    double number(const std::string& key, double fallback) {
        return has(key) ? number(key) : (used_.insert(key), fallback);
    }

    double number(const std::string& key) {
        if (!has(key)) {
            throw ValidationError(where_ + ": missing required key '" + key + "'");
        }
        const json& v = raw(key);
        if (!v.is_number()) {
            throw ValidationError(where_ + ": '" + key + "' must be a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ValidationError(where_ + ": '" + key + "' must be finite");
        }
        return d;
    }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) {
            return std::nullopt;
        }
        return number(key);
    }

    int integer(const std::string& key, int fallback, int lo, int hi) {
        if (!has(key)) {
            return fallback;
        }
        const json& v = raw(key);
        if (!v.is_number_integer()) {
            throw ValidationError(where_ + ": '" + key + "' must be an integer");
        }
        const auto i = v.get<long long>();
        if (i < lo || i > hi) {
            throw ValidationError(where_ + ": '" + key + "' must lie in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
        }
        return static_cast<int>(i);
    }

    std::vector<double> grid(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) {
            return fallback;
        }
        used_.insert(key);
        return parse_grid(obj_, key);
    }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!used_.contains(key)) {
                throw ValidationError(where_ + ": unknown key '" + key + "'");
            }
        }
    }

private:
    const json& obj_;
    std::string where_;
    std::set<std::string> used_;
};

Profile parse_profile(const json& node, const std::string& where, const Profile& fallback,
                      const Profile* mirror_of = nullptr) {
    if (node.is_string()) {
        const auto name = node.get<std::string>();
        if (name == "triangle") {
            return Profile::triangle(1.0);
        }
        if (name == "skew_triangle") {
            return Profile::skew_triangle(1.0);
        }
        if (name == "mirror" && mirror_of) {
            return mirror_of->mirrored();
        }
        throw ValidationError(where + ": unknown profile '" + name + "'");
    }
    Reader r(node, where);
    if (!r.has("type")) {
        r.finish();
        return fallback;
    }
    const json& type_json = r.raw("type");
    if (!type_json.is_string()) {
        throw ValidationError(where + ": 'type' must be a string");
    }
    const auto type = type_json.get<std::string>();
    Profile out = fallback;
    if (type == "triangle") {
        out = Profile::triangle(r.number("width", 1.0));
    } else if (type == "skew_triangle") {
        const double width = r.number("width", 1.0);
        out = Profile::skew_triangle(width, r.number("peak", -0.25 * width));
    } else if (type == "nodes") {
        const json& nodes = r.raw("nodes");
        if (!nodes.is_array()) {
            throw ValidationError(where + ": 'nodes' must be an array of [x, value] pairs");
        }
        std::vector<Profile::Node> pts;
        for (const auto& n : nodes) {
            if (!n.is_array() || n.size() != 2 || !n[0].is_number() || !n[1].is_number()) {
                throw ValidationError(where + ": each node must be [x, value]");
            }
            pts.push_back({n[0].get<double>(), n[1].get<double>()});
        }
        out = Profile(std::move(pts));
    } else if (type == "mirror" && mirror_of) {
        out = mirror_of->mirrored();
    } else {
        throw ValidationError(where + ": unknown profile type '" + type + "'");
    }
    if (r.has("normalize")) {
        const json& v = r.raw("normalize");
        if (!v.is_boolean()) {
            throw ValidationError(where + ": 'normalize' must be a boolean");
        }
        if (v.get<bool>()) {
            out = out.normalized();
        }
    }
    r.finish();
    return out;
}

Profile read_profile(Reader& r, const std::string& key, const Profile& fallback, const Profile* mirror_of = nullptr) {
    if (!r.has(key)) {
        return fallback;
    }
    return parse_profile(r.raw(key), key, fallback, mirror_of);
}

QuadratureOptions read_quadrature(Reader& r) {
    QuadratureOptions q;
    if (!r.has("quadrature")) {
        return q;
    }
    Reader qr(r.raw("quadrature"), "quadrature");
    q.relative_tolerance = qr.number("relative_tolerance", q.relative_tolerance);
    if (!(q.relative_tolerance > 0.0)) {
        throw ValidationError("quadrature.relative_tolerance must be positive");
    }
    q.max_panels = static_cast<std::size_t>(
        qr.integer("max_panels", static_cast<int>(q.max_panels), 16, 100000000));
    qr.finish();
    return q;
}

void require_nonempty(const std::vector<double>& g, const std::string& key) {
    if (g.empty()) {
        throw ValidationError("grid '" + key + "' must have at least one point");
    }
}

// Evaluates f(0..n-1) on up to `jobs` threads. Results keep index order and the
// lowest-index exception is rethrown, so output never depends on scheduling.
template <class F>
auto parallel_map(std::size_t n, int jobs, F f) -> std::vector<decltype(f(std::size_t{}))> {
    using R = decltype(f(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

void merge_warnings(std::vector<std::string>& into, const std::vector<std::string>& from) {
    for (const auto& w : from) {
        if (std::find(into.begin(), into.end(), w) == into.end()) {
            into.push_back(w);
        }
    }
}

// ---------------------------------------------------------------------------

ExperimentResult coherent_info_sweep(Reader& r, int jobs) {
    const Profile profile = read_profile(r, "profile", Profile::triangle(1.0));
    auto mus = r.grid("mu_over_ell", parse_grid(json{{"g", {{"start", 0.0}, {"stop", 3.0}, {"step", 0.1}}}}, "g"));
    auto delays = r.grid("delay_over_ell", {1.5});
    const QuadratureOptions q = read_quadrature(r);
    r.finish();
    require_nonempty(mus, "mu_over_ell");
    require_nonempty(delays, "delay_over_ell");
    const double ell = profile.support_width();
    for (double d : delays) {
        if (!(d * ell > ell)) {
            throw GeometryError("delay_over_ell must exceed 1: Alice's couplings must be strictly timelike separated");
        }
    }

    const std::size_t n = mus.size() * delays.size();
    const auto values = parallel_map(n, jobs, [&](std::size_t i) {
        return alice_to_field(mus[i / delays.size()], delays[i % delays.size()] * ell, profile, q);
    });
    ExperimentResult out;
    out.table.header = {"mu_over_ell", "delay_over_ell", "coherent_info_bits"};
    for (std::size_t i = 0; i < n; ++i) {
        out.table.rows.push_back({mus[i / delays.size()], delays[i % delays.size()], values[i]});
    }
    return out;
}

TransferParams read_transfer(Reader& r) {
    TransferParams p;
    p.alice_profile = read_profile(r, "alice_profile", p.alice_profile);
    p.bob_profile = read_profile(r, "bob_profile", p.alice_profile.mirrored(), &p.alice_profile);
    p.delay = r.number("delay", p.delay);
    p.distance = r.number("distance", p.distance);
    p.alice_position = r.number("alice_position", p.alice_position);
    p.t0 = r.number("t0", p.t0);
    p.quadrature = read_quadrature(r);
    return p;
}

// Either a grid of target ||gamma_1||^2 (solved for mu_A) or a grid of mu_A directly.
std::vector<TransferParams> transfer_settings(Reader& r, const TransferParams& base, const std::string& norm_key,
                                              std::vector<double> default_norms) {
    if (r.has("mu_A") && r.has(norm_key)) {
        throw ValidationError("give either 'mu_A' or '" + norm_key + "', not both");
    }
    std::vector<TransferParams> out;
    if (r.has("mu_A")) {
        const auto mus = r.grid("mu_A", {});
        require_nonempty(mus, "mu_A");
        for (double mu : mus) {
            if (mu == 0.0) {
                throw ValidationError("mu_A must be nonzero for a transfer");
            }
            auto p = base;
            p.alice_coupling = mu;
            out.push_back(p);
        }
        return out;
    }
    const auto norms = r.grid(norm_key, std::move(default_norms));
    require_nonempty(norms, norm_key);
    for (double g : norms) {
        if (!(g > 0.0)) {
            throw ValidationError(norm_key + " values must be positive");
        }
        auto p = base;
        p.alice_coupling = alice_coupling_for_gamma_norm(base, g);
        out.push_back(p);
    }
    return out;
}

ExperimentResult state_transfer_experiment(Reader& r, std::uint64_t seed, int jobs) {
    const TransferParams base = read_transfer(r);
    const int haar = r.integer("haar_samples", kDefaultHaarSamples, 0, 100000);
    validate(base);
    auto settings = transfer_settings(r, base, "gamma1_norm_sq", {0.005, 0.02, 0.05, 0.1, 0.2});
    r.finish();
    const auto inputs = standard_inputs(haar, seed);

    const auto reports =
        parallel_map(settings.size(), jobs, [&](std::size_t i) { return state_transfer(settings[i], inputs); });
    ExperimentResult out;
    out.table.header = {"mu_A", "gamma1_norm_sq", "input_label", "fidelity", "bound"};
    for (const auto& rep : reports) {
        for (const auto& f : rep.fidelity_per_input) {
            out.table.rows.push_back({rep.alice_coupling, rep.norm_gamma1, f.label, f.fidelity, rep.bound_value});
        }
        merge_warnings(out.warnings, rep.warnings);
    }
    return out;
}

ExperimentResult cavity_experiment(Reader& r, std::uint64_t seed, int jobs) {
    CavityParams base;
    base.profile = read_profile(r, "profile", base.profile);
    base.cavity_length = r.number("cavity_length", base.cavity_length);
    base.alice_position = r.optional_number("alice_position");
    base.t0 = r.number("t0", base.t0);
    base.delay = r.number("delay", base.delay);
    base.bob_sense_time = r.optional_number("bob_sense_time");
    base.bob_focal_time = r.optional_number("bob_focal_time");
    base.bob_focal_position = r.optional_number("bob_focal_position");
    base.mode_cutoff = r.integer("mode_cutoff", base.mode_cutoff, 1, 1 << 20);
    const auto lambdas = r.grid("lambda1", {3.0, 5.0, 10.0});
    const int haar = r.integer("haar_samples", kDefaultHaarSamples, 0, 100000);
    r.finish();
    require_nonempty(lambdas, "lambda1");
    std::vector<CavityParams> settings;
    for (double l : lambdas) {
        auto p = base;
        p.lambda1 = l;
        validate(p);
        settings.push_back(p);
    }
    const auto inputs = standard_inputs(haar, seed);

    const auto reports =
        parallel_map(settings.size(), jobs, [&](std::size_t i) { return cavity_transfer(settings[i], inputs); });
    ExperimentResult out;
    out.table.header = {"lambda1", "gamma_norm_sq", "fidelity", "bound"};
    for (const auto& rep : reports) {
        out.table.rows.push_back({rep.lambda1, rep.gamma_norm_sq, rep.min_fidelity(), rep.bound_value});
        merge_warnings(out.warnings, rep.warnings);
    }
    return out;
}

ExperimentResult delocalize_experiment(Reader& r, std::uint64_t seed, int jobs) {
    const TransferParams t = read_transfer(r);
    DelocalizeParams base;
    base.alice_profile = t.alice_profile;
    base.bob_profile = t.bob_profile;
    base.delay = t.delay;
    base.distance = t.distance;
    base.alice_position = t.alice_position;
    base.t0 = t.t0;
    base.quadrature = t.quadrature;
    const int haar = r.integer("haar_samples", kDefaultHaarSamples, 0, 100000);
    validate(base);
    if (r.has("mu_A") && r.has("gamma2_norm_sq")) {
        throw ValidationError("give either 'mu_A' or 'gamma2_norm_sq', not both");
    }
    std::vector<DelocalizeParams> settings;
    if (r.has("mu_A")) {
        const auto mus = r.grid("mu_A", {});
        require_nonempty(mus, "mu_A");
        for (double mu : mus) {
            if (mu == 0.0) {
                throw ValidationError("mu_A must be nonzero");
            }
            auto p = base;
            p.alice_coupling = mu;
            settings.push_back(p);
        }
    } else {
        const auto norms = r.grid("gamma2_norm_sq", {0.005, 0.01, 0.02});
        require_nonempty(norms, "gamma2_norm_sq");
        for (double g : norms) {
            auto p = base;
            p.alice_coupling = alice_coupling_for_gamma2_norm(base, g);
            settings.push_back(p);
        }
    }
    r.finish();
    const auto inputs = standard_inputs(haar, seed);

    const auto reports =
        parallel_map(settings.size(), jobs, [&](std::size_t i) { return delocalize(settings[i], inputs); });
    ExperimentResult out;
    out.table.header = {"sender_coupling", "gamma2_norm_sq", "input_label", "joint_fidelity", "bound",
                        "max_single_coherence"};
    for (const auto& rep : reports) {
        for (const auto& res : rep.results) {
            out.table.rows.push_back({rep.alice_coupling, rep.norm_gamma2, res.label, res.joint_fidelity,
                                      rep.bound_value, std::max(res.coherence_left, res.coherence_right)});
        }
        merge_warnings(out.warnings, rep.warnings);
    }
    return out;
}

ExperimentResult erasure_experiment(Reader& r, int jobs) {
    const auto ns = r.grid("N", {1, 2, 3, 4, 5, 6});
    r.finish();
    require_nonempty(ns, "N");
    std::vector<int> counts;
    for (double v : ns) {
        if (v != std::floor(v) || v < 1.0 || v > 1e6) {
            throw ValidationError("N values must be integers between 1 and 1e6");
        }
        counts.push_back(static_cast<int>(v));
    }
    const auto values = parallel_map(counts.size(), jobs, [&](std::size_t i) { return erasure_coherent_info(counts[i]); });
    ExperimentResult out;
    out.table.header = {"N", "coherent_info_bits"};
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out.table.rows.push_back({static_cast<long long>(counts[i]), values[i]});
    }
    return out;
}

// A failed audit is a numerical-tolerance failure; the checks are reported in
// the exception message since no CSV is written.
ExperimentResult audit_experiment(Reader& r) {
    AuditReport report;
    if (r.has("forged")) {
        Reader f(r.raw("forged"), "forged");
        const double na = f.number("alpha1_norm_sq");
        const double ng = f.number("gamma1_norm_sq");
        const double phi = f.number("phi");
        const double ng2 = f.number("gamma2_norm_sq", ng);
        f.finish();
        r.finish();
        report = audit_inequalities(na, ng, phi, ng2);
    } else {
        TransferParams p = read_transfer(r);
        const int polar = r.integer("polar_steps", 7, 2, 1000);
        const int azimuth = r.integer("azimuth_steps", 8, 1, 1000);
        validate(p);
        auto settings = transfer_settings(r, p, "gamma1_norm_sq", {0.02});
        r.finish();
        if (settings.size() != 1) {
            throw ValidationError("audit takes a single parameter setting");
        }
        report = transfer_audit(settings.front(), polar, azimuth);
    }
    report.throw_if_failed();
    ExperimentResult out;
    out.table.header = {"check", "pass", "margin"};
    for (const auto& c : report.checks) {
        out.table.rows.push_back({c.name, c.pass, c.margin});
    }
    return out;
}

std::string compiler_version() {
#if defined(__clang__)
    return std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    return "gcc " + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__) + "." +
           std::to_string(__GNUC_PATCHLEVEL__);
#else
    return "unknown";
#endif
}

json versions() {
    return {
        {"fieldcomm", kVersion},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                      std::to_string(BOOST_VERSION % 100)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"compiler", compiler_version()},
    };
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << content;
    os.close();
    if (!os) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::filesystem::path temp_path(const std::filesystem::path& target) {
    auto p = target;
    p += ".tmp";
    return p;
}

}  // namespace

const std::vector<std::string>& experiments() {
    static const std::vector<std::string> names{"coherent-info-sweep", "state-transfer", "cavity",
                                                "delocalize",          "erasure",        "audit"};
    return names;
}

std::string format_double(double v) {
    if (v == 0.0) {
        v = 0.0;  // no negative zero in output
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out += (i ? "," : "") + table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            std::visit(
                [&](const auto& c) {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out += format_double(c);
                    } else if constexpr (std::is_same_v<T, long long>) {
                        out += std::to_string(c);
                    } else if constexpr (std::is_same_v<T, bool>) {
                        out += c ? "true" : "false";
                    } else {
                        out += c;
                    }
                },
                row[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<double> parse_grid(const json& config, const std::string& key) {
    const json& g = config.at(key);
    auto finite = [&](const json& v) {
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            throw ValidationError("grid '" + key + "' entries must be finite numbers");
        }
        return v.get<double>();
    };
    if (g.is_number()) {
        return {finite(g)};
    }
    if (g.is_array()) {
        std::vector<double> out;
        for (const auto& v : g) {
            out.push_back(finite(v));
        }
        if (out.empty()) {
            throw ValidationError("grid '" + key + "' must have at least one point");
        }
        return out;
    }
    if (g.is_object()) {
        Reader r(g, "grid '" + key + "'");
        const double start = r.number("start");
        const double stop = r.number("stop");
        const double step = r.number("step");
        r.finish();
        if (!(step > 0.0) || stop < start) {
            throw ValidationError("grid '" + key + "' needs step > 0 and stop >= start");
        }
        // Tolerate rounding in (stop - start) / step so the stop is included.
        const double count = std::floor((stop - start) / step + 1e-9);
        if (count + 1 > static_cast<double>(kMaxGridSize)) {
            throw ValidationError("grid '" + key + "' is too large");
        }
        std::vector<double> out;
        for (long long i = 0; i <= static_cast<long long>(count); ++i) {
            out.push_back(start + static_cast<double>(i) * step);
        }
        return out;
    }
    throw ValidationError("grid '" + key + "' must be a number, an array, or {start, stop, step}");
}

int resolve_jobs(std::optional<int> cli_jobs, const char* env_value) {
    if (cli_jobs) {
        if (*cli_jobs < 1) {
            throw ValidationError("--jobs must be at least 1");
        }
        return *cli_jobs;
    }
    if (env_value && *env_value) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(env_value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != std::char_traits<char>::length(env_value) || v < 1) {
            throw ValidationError(std::string("FIELDCOMM_JOBS must be a positive integer, got '") + env_value + "'");
        }
        return v;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

ExperimentResult run_experiment(const std::string& experiment, const json& config, std::uint64_t seed, int jobs) {
    Reader r(config, "config");
    if (r.has("experiment")) {
        const json& e = r.raw("experiment");
        if (!e.is_string() || e.get<std::string>() != experiment) {
            throw ValidationError("config is for experiment " + e.dump() + ", not '" + experiment + "'");
        }
    }
    // Consumed by run(); accepted here so a config can be passed through unchanged.
    if (r.has("seed")) {
        r.raw("seed");
    }
    if (r.has("output")) {
        r.raw("output");
    }
    if (experiment == "coherent-info-sweep") {
        return coherent_info_sweep(r, jobs);
    }
    if (experiment == "state-transfer") {
        return state_transfer_experiment(r, seed, jobs);
    }
    if (experiment == "cavity") {
        return cavity_experiment(r, seed, jobs);
    }
    if (experiment == "delocalize") {
        return delocalize_experiment(r, seed, jobs);
    }
    if (experiment == "erasure") {
        return erasure_experiment(r, jobs);
    }
    if (experiment == "audit") {
        return audit_experiment(r);
    }
    throw ValidationError("unknown experiment '" + experiment + "'");
}

std::filesystem::path manifest_path(const std::filesystem::path& csv) {
    auto p = csv;
    p.replace_extension(".manifest.json");
    return p;
}

int run(const RunOptions& options, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::filesystem::path> temporaries;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temporaries) {
            std::filesystem::remove(t, ec);
        }
    };
    try {
        if (std::find(experiments().begin(), experiments().end(), options.experiment) == experiments().end()) {
            throw ValidationError("unknown experiment '" + options.experiment + "'");
        }
        std::ifstream is(options.config_path);
        if (!is) {
            throw ValidationError("cannot read config " + options.config_path.string());
        }
        json config;
        try {
            config = json::parse(is);
        } catch (const json::parse_error& e) {
            throw ValidationError("config is not valid JSON: " + std::string(e.what()));
        }
        if (!config.is_object()) {
            throw ValidationError("config must be a JSON object");
        }

        std::uint64_t seed = kDefaultSeed;
        if (options.seed) {
            seed = *options.seed;
        } else if (config.contains("seed")) {
            if (!config["seed"].is_number_unsigned()) {
                throw ValidationError("seed must be a non-negative integer");
            }
            seed = config["seed"].get<std::uint64_t>();
        }
        std::filesystem::path out = options.experiment + ".csv";
        if (options.out) {
            out = *options.out;
        } else if (config.contains("output")) {
            if (!config["output"].is_string()) {
                throw ValidationError("output must be a path string");
            }
            out = config["output"].get<std::string>();
        }
        const int jobs = resolve_jobs(options.jobs, std::getenv("FIELDCOMM_JOBS"));

        const ExperimentResult result = run_experiment(options.experiment, config, seed, jobs);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        json manifest{
            {"experiment", options.experiment},
            {"config_path", options.config_path.string()},
            {"config", config},
            {"seed", seed},
            {"jobs", jobs},
            {"csv", out.filename().string()},
            {"header", result.table.header},
            {"rows", result.table.rows.size()},
            {"warnings", result.warnings},
            {"versions", versions()},
            {"wall_time_seconds", wall},
        };

        const auto mpath = manifest_path(out);
        const auto csv_tmp = temp_path(out);
        const auto manifest_tmp = temp_path(mpath);
        if (out.has_parent_path()) {
            std::filesystem::create_directories(out.parent_path());
        }
        temporaries = {csv_tmp, manifest_tmp};
        write_file(csv_tmp, render_csv(result.table));
        write_file(manifest_tmp, manifest.dump(2) + "\n");
        std::filesystem::rename(csv_tmp, out);
        std::filesystem::rename(manifest_tmp, mpath);
        temporaries.clear();

        for (const auto& w : result.warnings) {
            log << "warning: " << w << '\n';
        }
        log << "wrote " << result.table.rows.size() << " rows to " << out.string() << " (" << mpath.string() << ")\n";
        return kExitOk;
    } catch (const ValidationError& e) {
        cleanup();
        log << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        cleanup();
        log << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const json::exception& e) {
        cleanup();
        log << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        cleanup();
        log << "error: " << e.what() << '\n';
        return kExitUnexpected;
    }
}

}  // namespace fieldcomm::cli
