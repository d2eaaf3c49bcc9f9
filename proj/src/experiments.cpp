#include "lowensim/experiments.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "lowensim/log.hpp"
#include "lowensim/rng.hpp"

namespace lowensim {

namespace {

using Row = std::vector<std::string>;
using Clock = std::chrono::steady_clock;

double wall_ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double num_param(const json& params, const std::string& key, double fallback) {
    if (!params.contains(key)) return fallback;
    if (!params[key].is_number()) throw ConfigInvalid("param '" + key + "' must be a number");
    return params[key].get<double>();
}

Eigen::Index int_param(const json& params, const std::string& key, Eigen::Index fallback) {
    const double v = num_param(params, key, double(fallback));
    if (v != std::floor(v)) throw ConfigInvalid("param '" + key + "' must be an integer");
    return static_cast<Eigen::Index>(v);
}

std::string str_param(const json& params, const std::string& key, const std::string& fallback) {
    if (!params.contains(key)) return fallback;
    if (!params[key].is_string()) throw ConfigInvalid("param '" + key + "' must be a string");
    return params[key].get<std::string>();
}

std::string fmt(long long v) { return std::to_string(v); }
std::string fmt(Eigen::Index v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

struct ExperimentDef {
    std::vector<std::string> columns;
    std::function<std::vector<Row>(const json&, unsigned long long)> run;
    std::string help;
};

// --- individual experiments --------------------------------------------------

std::vector<Row> run_grover_demo(const json& params, unsigned long long seed) {
    const auto t0 = Clock::now();
    const Eigen::Index n = int_param(params, "N", 16);
    const Eigen::Index k = int_param(params, "K", 1);
    const double eps = num_param(params, "eps", 1e-3);

    std::mt19937_64 gen(derive_seed(seed, 0));
    std::vector<Eigen::Index> marked;
    for (Eigen::Index i = 0; i < k; ++i)
        marked.push_back(static_cast<Eigen::Index>(gen() % static_cast<unsigned long long>(n)));

    GroverGaFamily family = grover_ga_family(n, marked);
    const double t = num_param(params, "t", std::acos(-1.0) * double(n) / 4.0);
    const double delta = family.delta_low_energy();

    GapAmpHamiltonian inst = family.materialize();
    inst.audit();
    AssembledEncoding enc = inst.assemble();
    StateVector psi = StateVector::uniform(inst.h.dim());

    std::optional<double> gamma;
    const std::string gamma_mode = str_param(params, "gamma", "delta");
    if (gamma_mode == "delta") gamma = delta;
    else if (gamma_mode != "auto") throw ConfigInvalid("gamma must be 'delta' or 'auto'");

    SimReport rep = simulate_low_energy(enc.be, enc.lambda, t, delta, eps, psi, gamma);

    // Exact per-factor dynamics never materialize N^K.
    std::vector<Vector> bras, kets;
    for (Eigen::Index i = 0; i < k; ++i) {
        bras.push_back(StateVector::basis_state(n, marked[static_cast<size_t>(i)]).amplitudes);
        kets.push_back(StateVector::uniform(n).amplitudes);
    }
    const double marked_prob = std::norm(family.tensor_overlap(bras, kets, t));

    Row row{fmt(n),
            fmt(k),
            format_double(t),
            format_double(rep.plan.delta),
            format_double(rep.plan.lambda),
            format_double(rep.plan.gamma),
            regime_name(rep.plan.regime),
            format_double(eps),
            fmt(rep.plan.predicted_degree),
            fmt(rep.ledger.degree_cos),
            fmt(rep.ledger.degree_sin),
            fmt(static_cast<long long>(rep.ledger.amplification_factor)),
            fmt(rep.ledger.encoding_uses),
            format_double(rep.overlap),
            format_double(rep.residual_norm),
            format_double(marked_prob),
            format_double(wall_ms_since(t0)),
            "ok"};
    return {row};
}

std::vector<Row> run_regime_sweep(const json& params, unsigned long long) {
    const auto t0 = Clock::now();
    const double t = num_param(params, "t", 100.0);
    const double lambda = num_param(params, "lambda", 1.0);
    double delta = num_param(params, "delta", lambda * num_param(params, "delta_over_lambda", 1.0 / 16.0));
    const double eps = num_param(params, "eps", 1e-3);

    SimPlan plan = choose_gamma(t, delta, lambda, eps);
    const std::string gamma_mode = str_param(params, "gamma", "auto");
    if (gamma_mode == "delta") plan.gamma = delta;
    else if (gamma_mode != "auto") throw ConfigInvalid("gamma must be 'delta' or 'auto'");

    auto [pc, ps] = low_energy_evolution_polys(t, lambda, plan.gamma, 0.25 * eps);
    const long long dc = pc.degree(), ds = ps.degree();
    Row row{format_double(t),
            format_double(delta),
            format_double(lambda),
            format_double(eps),
            format_double(plan.gamma),
            regime_name(plan.regime),
            fmt(plan.predicted_degree),
            fmt(dc),
            fmt(ds),
            fmt(dc + ds),
            fmt(3 * (dc + ds)),
            format_double(wall_ms_since(t0)),
            "ok"};
    return {row};
}

std::vector<Row> run_qsp_compare(const json& params, unsigned long long) {
    const auto t0 = Clock::now();
    const double t = num_param(params, "t", 100.0);
    const double lambda = num_param(params, "lambda", 1.0);
    double delta = num_param(params, "delta", lambda * num_param(params, "delta_over_lambda", 1.0 / 16.0));
    const double eps = num_param(params, "eps", 1e-3);
    const double eps_poly = 0.25 * eps;

    SimPlan plan = choose_gamma(t, delta, lambda, eps);
    if (str_param(params, "gamma", "delta") == "delta") plan.gamma = delta;
    auto [pc, ps] = low_energy_evolution_polys(t, lambda, plan.gamma, eps_poly);
    const long long sga_deg = pc.degree() + ps.degree();
    const long long sga_uses = 3 * sga_deg;

    ChebPoly qc = jacobi_anger(t * lambda, eps_poly, TrigKind::cos);
    ChebPoly qs = jacobi_anger(t * lambda, eps_poly, TrigKind::sin);
    const long long qsp_deg = qc.degree() + qs.degree();
    const long long qsp_uses = 3 * qsp_deg;

    Row row{format_double(t),
            format_double(delta),
            format_double(lambda),
            format_double(eps),
            format_double(plan.gamma),
            fmt(sga_deg),
            fmt(sga_uses),
            fmt(qsp_deg),
            fmt(qsp_uses),
            fmt(sga_uses < qsp_uses),
            format_double(wall_ms_since(t0)),
            "ok"};
    return {row};
}

std::vector<Row> run_expander_spectrum(const json& params, unsigned long long seed) {
    const auto t0 = Clock::now();
    const Eigen::Index n = int_param(params, "N", 32);
    const Eigen::Index d = int_param(params, "d", 3);
    const Eigen::Index x = int_param(params, "x", 0);
    const double c = num_param(params, "c", 40.0);

    Graph g = (str_param(params, "graph", "random") == "complete")
                  ? complete_graph(n)
                  : random_regular_graph(n, d, derive_seed(seed, 0));
    ExpanderInstance inst = expander_ga_hamiltonian(g, x);
    inst.ham.audit();

    StateVector s = StateVector::uniform(n);
    StateVector projected = project_to_low_energy(s, inst.ham.h, c / double(n));
    const double proj_overlap = std::abs(projected.amplitudes.dot(s.amplitudes));

    Row row{fmt(n),
            fmt(d),
            fmt(inst.certs.colors),
            format_double(inst.certs.adjacency_lambda2),
            fmt(inst.certs.expansion_ok),
            format_double(inst.certs.ground_energy),
            format_double(inst.certs.spectral_gap),
            format_double(1.0 / (4.0 * double(n))),
            format_double(inst.certs.ground_state_deviation),
            format_double(inst.certs.psi1_overlap_sq),
            format_double(c),
            format_double(proj_overlap),
            format_double(wall_ms_since(t0)),
            "ok"};
    return {row};
}

std::vector<Row> run_random_time_projection(const json& params, unsigned long long seed) {
    const auto t0 = Clock::now();
    const Eigen::Index n = int_param(params, "N", 64);
    const Eigen::Index d = int_param(params, "d", 3);
    const Eigen::Index x = int_param(params, "x", 0);
    const double alpha = num_param(params, "alpha", 64.0);
    const double c = num_param(params, "c", 40.0);

    Graph g = random_regular_graph(n, d, derive_seed(seed, 0));
    ExpanderInstance inst = expander_ga_hamiltonian(g, x);
    StateVector psi = project_to_low_energy(StateVector::uniform(n), inst.ham.h, c / double(n));

    RandomTimeProjectionResult res = random_time_projection(inst.ham.h, psi, alpha);
    const double marked_prob = res.channel_output(x, x).real();
    const double bound = 0.5 * (0.25 - 8.0 / alpha);

    Row row{fmt(n),
            fmt(d),
            format_double(alpha),
            format_double(res.char_bound),
            format_double(res.measured_char_sup),
            format_double(res.ground_state_prob),
            format_double(marked_prob),
            format_double(bound),
            fmt(marked_prob >= bound),
            format_double(wall_ms_since(t0)),
            "ok"};
    return {row};
}

std::vector<Row> run_clock_propagation(const json& params, unsigned long long) {
    const auto t0 = Clock::now();
    const ClockDemoDefaults def = clock_demo_defaults();

    ClockSpec spec;
    spec.c1 = int_param(params, "c1", def.c1);
    spec.c2 = int_param(params, "c2", def.c2);
    const std::string circuit = str_param(params, "circuit", "demo");
    const Eigen::Index g = int_param(params, "G", 4);
    if (circuit == "demo") {
        spec.gates = clock_demo_circuit();
        if (g != 4) throw ConfigInvalid("the demo circuit has exactly G = 4 gates");
    } else if (circuit == "identity") {
        const Eigen::Index n_q = int_param(params, "n", 2);
        spec.gates.assign(static_cast<size_t>(g), Matrix::Identity(1 << n_q, 1 << n_q));
    } else {
        spec.gates = gates_from_json(json::parse(read_file(circuit)), int_param(params, "n", 2));
    }

    WavepacketSpec wp;
    wp.x0 = int_param(params, "x0", spec.c1 * spec.g() / 2);
    wp.sigma_hat = num_param(params, "sigma_hat", def.sigma_hat);
    wp.p0_hat = num_param(params, "p0_hat", def.p0_hat);
    const double t_hat = num_param(params, "t_hat", def.t_hat);

    std::optional<double> delta_coeff;
    if (params.contains("delta_coeff")) delta_coeff = num_param(params, "delta_coeff", 0.0);

    ClockPropagationResult res = clock_propagation_fidelity(spec, wp, t_hat, delta_coeff);

    Row row{fmt(spec.g()),
            fmt(spec.g_prime()),
            fmt(spec.n_qubits()),
            fmt(spec.c1),
            fmt(spec.c2),
            format_double(wp.sigma_hat),
            format_double(wp.p0_hat),
            format_double(t_hat),
            format_double(res.t),
            format_double(res.wavepacket_energy),
            format_double(res.wavepacket_energy * double(spec.g()) * double(spec.g())),
            format_double(res.trace_distance),
            format_double(res.circuit_fidelity),
            format_double(wall_ms_since(t0)),
            "ok"};
    return {row};
}

std::vector<Row> run_trig_degree_probe(const json& params, unsigned long long) {
    const auto t0 = Clock::now();
    const double t = num_param(params, "t", 100.0);
    const double eps = num_param(params, "eps", 0.01);
    // Default window: t*Delta pinned just below sqrt(eps), inside the regime.
    const double tdelta = num_param(params, "tdelta", 0.95 * std::sqrt(eps));
    const double theta_m = num_param(params, "theta_M", std::asin(std::sqrt(tdelta / t)));

    const int k_star = min_trig_degree_probe(t, eps, theta_m);
    const double bound = std::sqrt(2.0 * t) / std::acos(-1.0);

    Row row{format_double(t),
            format_double(eps),
            format_double(theta_m),
            format_double(std::sin(theta_m) * std::sin(theta_m)),
            fmt(static_cast<long long>(k_star)),
            format_double(bound),
            fmt(double(k_star) >= bound),
            format_double(wall_ms_since(t0)),
            "ok"};
    return {row};
}

std::vector<Row> run_poly_certify(const json& params, unsigned long long) {
    std::vector<Row> rows;
    auto emit = [&](const std::string& kind, const ChebPoly& p, double bound, Clock::time_point t0) {
        rows.push_back(Row{kind, fmt(static_cast<long long>(p.degree())),
                           fmt(static_cast<long long>(p.cert.grid_points)),
                           format_double(p.cert.sup_error), format_double(p.cert.weight),
                           format_double(bound), fmt(p.cert.sup_error <= bound),
                           format_double(wall_ms_since(t0)), "ok"});
    };

    {
        const auto t0 = Clock::now();
        const double t = num_param(params, "t", 20.0);
        const double lambda = num_param(params, "lambda", 1.0);
        const double gamma = num_param(params, "gamma", 0.05);
        const double eps = num_param(params, "eps", 1e-3);
        auto [pc, ps] = low_energy_evolution_polys(t, lambda, gamma, eps);
        emit("evolution_cos", pc, 2.0 * eps, t0);
        emit("evolution_sin", ps, 2.0 * eps, t0);
    }
    {
        const auto t0 = Clock::now();
        const double t = num_param(params, "ja_t", 30.0);
        const double eps = num_param(params, "ja_eps", 1e-4);
        emit("jacobi_anger_cos", jacobi_anger(t, eps, TrigKind::cos), eps, t0);
        emit("jacobi_anger_sin", jacobi_anger(t, eps, TrigKind::sin), eps, t0);
    }
    {
        const auto t0 = Clock::now();
        const double r = num_param(params, "rect_r", 0.5);
        const double delta = num_param(params, "rect_delta", 0.2);
        const double eps = num_param(params, "rect_eps", 0.1);
        emit("rectangle", rectangle_poly(r, delta, eps), eps, t0);
    }
    return rows;
}

const std::map<std::string, ExperimentDef>& registry() {
    static const std::map<std::string, ExperimentDef> reg = [] {
        std::map<std::string, ExperimentDef> m;
        m["grover_demo"] = {
            {"N", "K", "t", "delta", "lambda", "gamma", "regime", "eps", "predicted_degree",
             "degree_cos", "degree_sin", "amplification_factor", "encoding_uses", "overlap",
             "residual_norm", "exact_marked_prob", "wall_ms", "status"},
            run_grover_demo,
            "Search dynamics on the squared-Grover family: exact per-factor evolution plus the\n"
            "full gap-amplified simulation pipeline. params: N (16), K (1), t (pi N/4),\n"
            "eps (1e-3), gamma ('delta'|'auto')."};
        m["regime_sweep"] = {
            {"t", "delta", "lambda", "eps", "gamma", "regime", "predicted_degree", "degree_cos",
             "degree_sin", "total_degree", "encoding_uses", "wall_ms", "status"},
            run_regime_sweep,
            "Composite polynomial degrees across the regime map. params: t (100), lambda (1),\n"
            "delta or delta_over_lambda (1/16), eps (1e-3), gamma ('auto'|'delta')."};
        m["qsp_compare"] = {
            {"t", "delta", "lambda", "eps", "gamma", "sga_degree", "sga_encoding_uses",
             "qsp_degree", "qsp_encoding_uses", "sga_less_than_qsp", "wall_ms", "status"},
            run_qsp_compare,
            "Ledger comparison against the generic-QSP baseline at effective time t*lambda.\n"
            "params as regime_sweep; gamma defaults to 'delta'."};
        m["expander_spectrum"] = {
            {"N", "d", "colors", "adjacency_lambda2", "expansion_ok", "ground_energy",
             "spectral_gap", "gap_bound", "ground_state_dev", "psi1_overlap_sq", "c",
             "projected_overlap", "wall_ms", "status"},
            run_expander_spectrum,
            "Frustration-free expander-search certificates by exact diagonalization.\n"
            "params: N (32), d (3), x (0), c (40, low-energy cutoff c/N), graph\n"
            "('random'|'complete')."};
        m["random_time_projection"] = {
            {"N", "d", "alpha", "char_bound", "measured_char_sup", "ground_prob", "marked_prob",
             "bound", "passes", "wall_ms", "status"},
            run_random_time_projection,
            "Ground-state projection channel by random-time evolution on the expander\n"
            "instance. params: N (64), d (3), x (0), alpha (64), c (40)."};
        m["clock_propagation"] = {
            {"G", "Gprime", "n", "c1", "c2", "sigma_hat", "p0_hat", "t_hat", "t", "energy",
             "energy_times_G2", "trace_distance", "circuit_fidelity", "wall_ms", "status"},
            run_clock_propagation,
            "Wavepacket propagation through the clock chain with history-state decoding.\n"
            "params: circuit ('demo'|'identity'|<json path>), G, n, c1, c2, sigma_hat, p0_hat,\n"
            "t_hat, x0, delta_coeff (optional low-energy projection Delta = coeff/G^2)."};
        m["trig_degree_probe"] = {
            {"t", "eps", "theta_M", "delta", "K_star", "bound", "passes", "wall_ms", "status"},
            run_trig_degree_probe,
            "Minimal trigonometric degree for the windowed phase approximation, by bisection\n"
            "with a Lawson minimax inner solve. params: t (100), eps (0.01), tdelta, theta_M."};
        m["poly_certify"] = {
            {"kind", "degree", "grid_points", "sup_error", "weight", "error_bound", "passes",
             "wall_ms", "status"},
            run_poly_certify,
            "Builds the approximation pipeline pieces and reports their grid certificates.\n"
            "params: t, lambda, gamma, eps, ja_t, ja_eps, rect_r, rect_delta, rect_eps."};
        return m;
    }();
    return reg;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    if (!j.contains("experiment") || !j["experiment"].is_string())
        throw ConfigInvalid("config needs an 'experiment' string");
    cfg.experiment = j["experiment"].get<std::string>();
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw ConfigInvalid("'params' must be an object");
        cfg.params = j["params"];
    }
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        if (!s.contains("param") || !s.contains("values") || !s["values"].is_array() ||
            s["values"].empty())
            throw ConfigInvalid("'sweep' needs a param name and a nonempty values list");
        cfg.sweep_param = s["param"].get<std::string>();
        cfg.sweep_values.assign(s["values"].begin(), s["values"].end());
    }
    cfg.seed = j.value("seed", 0ULL);
    cfg.output = j.value("output", "");
    return cfg;
}

std::vector<std::string> experiment_names() {
    std::vector<std::string> names;
    for (const auto& [name, def] : registry()) names.push_back(name);
    return names;
}

std::string experiment_help(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) return "";
    std::string cols;
    for (const auto& c : it->second.columns) cols += (cols.empty() ? "" : ",") + c;
    return it->second.help + "\ncsv columns: " + cols;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs) {
    auto it = registry().find(cfg.experiment);
    if (it == registry().end()) {
        std::string names;
        for (const auto& n : experiment_names()) names += (names.empty() ? "" : ", ") + n;
        throw ConfigInvalid("unknown experiment '" + cfg.experiment + "'; valid names: " + names);
    }
    const ExperimentDef& def = it->second;

    std::vector<json> points;
    if (cfg.sweep_param) {
        for (const auto& v : cfg.sweep_values) {
            json p = cfg.params;
            p[*cfg.sweep_param] = v;
            points.push_back(std::move(p));
        }
    } else {
        points.push_back(cfg.params);
    }

    std::vector<std::vector<Row>> results(points.size());
    std::vector<char> failed(points.size(), 0);
    std::atomic<size_t> next{0};
    const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(points.size())));

    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) break;
            try {
                results[i] = def.run(points[i], derive_seed(cfg.seed, i));
            } catch (const std::exception& e) {
                failed[i] = 1;
                Row row(def.columns.size(), "");
                if (cfg.sweep_param) row[0] = points[i].value(*cfg.sweep_param, json()).dump();
                std::string msg = e.what();
                for (char& ch : msg)
                    if (ch == ',' || ch == '\n') ch = ';';
                row.back() = "error:" + msg;
                results[i] = {row};
            }
        }
    };
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }

    ExperimentResult out;
    out.columns = def.columns;
    for (size_t i = 0; i < results.size(); ++i) {
        out.any_failure = out.any_failure || failed[i];
        for (auto& row : results[i]) out.rows.push_back(std::move(row));
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const ExperimentConfig& cfg, const ExperimentResult& res, bool with_timestamp) {
    std::ostringstream out;
    out << "# lowensim experiment=" << cfg.experiment << " seed=" << cfg.seed << "\n";
    if (with_timestamp) {
        const std::time_t now = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
        out << "# timestamp=" << buf << "\n";
    }
    for (size_t c = 0; c < res.columns.size(); ++c)
        out << res.columns[c] << (c + 1 < res.columns.size() ? "," : "\n");
    for (const auto& row : res.rows)
        for (size_t c = 0; c < row.size(); ++c) out << row[c] << (c + 1 < row.size() ? "," : "\n");
    return out.str();
}

json to_json_result(const ExperimentConfig& cfg, const ExperimentResult& res) {
    json rows = json::array();
    for (const auto& row : res.rows) {
        json obj = json::object();
        for (size_t c = 0; c < res.columns.size() && c < row.size(); ++c)
            obj[res.columns[c]] = row[c];
        rows.push_back(std::move(obj));
    }
    return json{{"experiment", cfg.experiment}, {"seed", cfg.seed}, {"rows", rows}};
}

ClockDemoDefaults clock_demo_defaults() { return {}; }

std::vector<Matrix> clock_demo_circuit() {
    // (H x 1) CNOT (T x 1) (1 x X) on two qubits, applied in circuit order.
    json gates = json::array({json{{"name", "X"}, {"qubits", {1}}},
                              json{{"name", "T"}, {"qubits", {0}}},
                              json{{"name", "CNOT"}, {"qubits", {0, 1}}},
                              json{{"name", "H"}, {"qubits", {0}}}});
    return gates_from_json(gates, 2);
}

}  // namespace lowensim
