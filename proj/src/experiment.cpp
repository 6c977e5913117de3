#include "hallmhd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "hallmhd/heat.hpp"
#include "hallmhd/snapshot.hpp"

namespace hallmhd {

using nlohmann::json;

FitWindow ExperimentConfig::window_for(const std::string& name) const {
    auto it = fit_windows.find(name);
    if (it != fit_windows.end()) return it->second;
    it = fit_windows.find("default");
    if (it != fit_windows.end()) return it->second;
    return FitWindow{};
}

namespace {

std::vector<double> default_snapshot_times(double t_end) {
    std::vector<double> ts;
    for (double t : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75})
        if (t < 2.0 && t < t_end) ts.push_back(t);
    // 48 log-spaced samples on [2, t_end].
    const int m = 48;
    if (t_end >= 2.0) {
        const double ratio = t_end / 2.0;
        for (int i = 0; i < m; ++i)
            ts.push_back(2.0 * std::pow(ratio, static_cast<double>(i) / (m - 1)));
    }
    return ts;
}

const std::vector<std::string> kAllDiagnostics = {
    "energy", "derivative:1", "derivative:2", "difference", "gevrey",
    "radius", "weighted-moment", "ball", "moments", "phi"};

}  // namespace

ExperimentConfig desk_profile() {
    ExperimentConfig cfg;
    cfg.grid = GridSpec{64, 32.0 * std::numbers::pi, 2.0 / 3.0};
    cfg.stepper.dt = 0.05;
    cfg.stepper.scheme = Scheme::IfRk4;
    const double l_over = cfg.grid.box_length / (2.0 * std::numbers::pi);
    cfg.stepper.t_end = 0.5 * l_over * l_over;  // torus-validity horizon
    cfg.stepper.snapshot_times = default_snapshot_times(cfg.stepper.t_end);
    cfg.init = InitConfig{0.0, 0.35, 20250811};
    cfg.gevrey = GevreyParams{};
    cfg.diagnostics = kAllDiagnostics;
    cfg.fit_windows["default"] = FitWindow{2.0, cfg.stepper.t_end};
    cfg.output_dir = "runs/desk";
    return cfg;
}

ExperimentConfig smoke_profile() {
    ExperimentConfig cfg;
    cfg.grid = GridSpec{32, 16.0 * std::numbers::pi, 2.0 / 3.0};
    cfg.stepper.dt = 0.05;
    cfg.stepper.scheme = Scheme::IfRk4;
    cfg.stepper.t_end = 32.0;
    cfg.stepper.snapshot_times = default_snapshot_times(cfg.stepper.t_end);
    cfg.init = InitConfig{0.0, 0.35, 20250811};
    cfg.gevrey = GevreyParams{};
    cfg.diagnostics = kAllDiagnostics;
    cfg.fit_windows["default"] = FitWindow{2.0, cfg.stepper.t_end};
    cfg.output_dir = "runs/smoke";
    return cfg;
}

ExperimentConfig profile_by_name(const std::string& name) {
    if (name == "desk") return desk_profile();
    if (name == "smoke") return smoke_profile();
    throw std::invalid_argument("unknown profile '" + name + "' (expected desk or smoke)");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["grid"] = {{"n_per_axis", cfg.grid.n_per_axis},
                 {"box_length", cfg.grid.box_length},
                 {"dealias_fraction", cfg.grid.dealias_fraction}};
    j["stepper"] = {{"dt", cfg.stepper.dt},
                    {"scheme", cfg.stepper.scheme == Scheme::IfRk4 ? "if-rk4" : "if-euler"},
                    {"t_end", cfg.stepper.t_end},
                    {"safety", cfg.stepper.safety},
                    {"snapshot_times", cfg.stepper.snapshot_times},
                    {"store_states_at", cfg.stepper.store_states_at},
                    {"laplacian", cfg.stepper.rhs.laplacian},
                    {"nonlinear", cfg.stepper.rhs.nonlinear},
                    {"hall", cfg.stepper.rhs.hall}};
    j["init"] = {{"sigma", cfg.init.sigma},
                 {"amplitude", cfg.init.amplitude},
                 {"seed", cfg.init.seed}};
    j["gevrey"] = {{"r", cfg.gevrey.r},
                   {"s", cfg.gevrey.s},
                   {"tau0", cfg.gevrey.tau0},
                   {"alpha_tau", cfg.gevrey.alpha_tau}};
    j["ball_gamma"] = cfg.ball_gamma;
    j["diagnostics"] = cfg.diagnostics;
    json w = json::object();
    for (const auto& [k, v] : cfg.fit_windows) w[k] = {v.t_lo, v.t_hi};
    j["fit_windows"] = w;
    j["output_dir"] = cfg.output_dir;
    return j;
}

ExperimentConfig from_json(const json& j) {
    ExperimentConfig cfg;
    const auto& g = j.at("grid");
    cfg.grid.n_per_axis = g.at("n_per_axis").get<int>();
    cfg.grid.box_length = g.at("box_length").get<double>();
    cfg.grid.dealias_fraction = g.value("dealias_fraction", 2.0 / 3.0);
    const auto& st = j.at("stepper");
    cfg.stepper.dt = st.at("dt").get<double>();
    const std::string scheme = st.value("scheme", "if-rk4");
    if (scheme == "if-rk4")
        cfg.stepper.scheme = Scheme::IfRk4;
    else if (scheme == "if-euler")
        cfg.stepper.scheme = Scheme::IfEuler;
    else
        throw std::invalid_argument("unknown scheme '" + scheme + "'");
    cfg.stepper.t_end = st.at("t_end").get<double>();
    cfg.stepper.safety = st.value("safety", 0.4);
    cfg.stepper.snapshot_times = st.value("snapshot_times", std::vector<double>{});
    if (cfg.stepper.snapshot_times.empty())
        cfg.stepper.snapshot_times = default_snapshot_times(cfg.stepper.t_end);
    cfg.stepper.store_states_at = st.value("store_states_at", std::vector<double>{});
    cfg.stepper.rhs.laplacian = st.value("laplacian", true);
    cfg.stepper.rhs.nonlinear = st.value("nonlinear", true);
    cfg.stepper.rhs.hall = st.value("hall", true);
    if (j.contains("init")) {
        const auto& in = j.at("init");
        cfg.init.sigma = in.value("sigma", 0.0);
        cfg.init.amplitude = in.value("amplitude", 0.35);
        cfg.init.seed = in.value("seed", std::uint64_t{20250811});
    }
    if (j.contains("gevrey")) {
        const auto& ge = j.at("gevrey");
        cfg.gevrey.r = ge.value("r", 11.0 / 4.0);
        cfg.gevrey.s = ge.value("s", 11.0 / 8.0);
        cfg.gevrey.tau0 = ge.value("tau0", 0.25);
        cfg.gevrey.alpha_tau = ge.value("alpha_tau", 0.0625);
    }
    cfg.ball_gamma = j.value("ball_gamma", 5.0);
    cfg.diagnostics = j.value("diagnostics", kAllDiagnostics);
    if (j.contains("fit_windows")) {
        for (const auto& [k, v] : j.at("fit_windows").items())
            cfg.fit_windows[k] = FitWindow{v.at(0).get<double>(), v.at(1).get<double>()};
    }
    cfg.output_dir = j.value("output_dir", std::string("run"));
    return cfg;
}

}  // namespace

std::string to_json_string(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

ExperimentConfig config_from_json_string(const std::string& text) {
    return from_json(json::parse(text));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read config " + path.string());
    json j;
    is >> j;
    return from_json(j);
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string dump = to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

bool enabled(const ExperimentConfig& cfg, const std::string& name) {
    return std::find(cfg.diagnostics.begin(), cfg.diagnostics.end(), name) !=
           cfg.diagnostics.end();
}

void push(TrajectoryRecord& rec, const std::string& key, double v) {
    rec.series[key].push_back(v);
}

std::vector<Observer> build_observers(const ExperimentConfig& cfg,
                                      const SolenoidalState& initial) {
    std::vector<Observer> obs;
    if (enabled(cfg, "energy"))
        obs.push_back([](const SolenoidalState& s, TrajectoryRecord& r) {
            push(r, "E", energy(s));
        });
    for (int m : {1, 2}) {
        if (!enabled(cfg, "derivative:" + std::to_string(m))) continue;
        obs.push_back([m](const SolenoidalState& s, TrajectoryRecord& r) {
            push(r, "lambda" + std::to_string(m), lambda_energy(s, m));
        });
    }
    if (enabled(cfg, "difference")) {
        auto flow = std::make_shared<HeatFlow>(HeatFlow{initial});
        obs.push_back([flow](const SolenoidalState& s, TrajectoryRecord& r) {
            const SolenoidalState heat = heat_evolve(*flow, s.time - flow->initial.time);
            SolenoidalState diff{s.u - heat.u, s.B - heat.B, s.time};
            push(r, "D_l2sq", energy(diff));
            push(r, "E_heat", energy(heat));
        });
    }
    if (enabled(cfg, "gevrey")) {
        const GevreyParams p = cfg.gevrey;
        obs.push_back([p](const SolenoidalState& s, TrajectoryRecord& r) {
            const GevreyRecord rec = gevrey_record(s, p);
            push(r, "tau", rec.tau);
            push(r, "J_r", rec.J_r);
            push(r, "H_r", rec.H_r);
            push(r, "G_r", rec.G_r);
            push(r, "K_r", rec.K_r);
            push(r, "N_r", rec.N_r);
            push(r, "M_r", rec.M_r);
            push(r, "resolved", rec.resolved ? 1.0 : 0.0);
        });
    }
    if (enabled(cfg, "radius")) {
        obs.push_back([](const SolenoidalState& s, TrajectoryRecord& r) {
            try {
                const RadiusEstimate est = radius_estimate(s.u);
                push(r, "tau_est", est.tau_est);
                push(r, "tau_est_residual", est.fit_residual);
            } catch (const std::invalid_argument&) {
                push(r, "tau_est", std::numeric_limits<double>::quiet_NaN());
                push(r, "tau_est_residual", std::numeric_limits<double>::quiet_NaN());
            }
        });
    }
    if (enabled(cfg, "weighted-moment")) {
        obs.push_back([](const SolenoidalState& s, TrajectoryRecord& r) {
            push(r, "wmoment", weighted_moment(s));
            push(r, "boundary_frac", boundary_energy_fraction(s));
        });
    }
    if (enabled(cfg, "ball")) {
        const double gamma = cfg.ball_gamma;
        obs.push_back([gamma](const SolenoidalState& s, TrajectoryRecord& r) {
            const double g = std::sqrt(0.5 * gamma / (s.time + 1.0));
            push(r, "ball_g", g);
            push(r, "ball", ball_integral(s, g));
        });
    }
    if (enabled(cfg, "moments")) {
        obs.push_back([](const SolenoidalState& s, TrajectoryRecord& r) {
            const Matrix3 a = momentum_flux_matrix(s);
            const Matrix3 c = cross_flux_matrix(s);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    push(r, "sA_" + std::to_string(i) + std::to_string(j), a(i, j));
                    push(r, "sC_" + std::to_string(i) + std::to_string(j), c(i, j));
                }
            }
        });
    }
    return obs;
}

}  // namespace

RunResult run_experiment_in_memory(const ExperimentConfig& cfg) {
    cfg.grid.validate();
    cfg.gevrey.validate();
    RunResult res;
    res.initial = make_initial_data(cfg.init.sigma, cfg.init.amplitude, cfg.init.seed, cfg.grid);
    res.record = evolve(res.initial, cfg.stepper, build_observers(cfg, res.initial));
    return res;
}

RunResult run_experiment(const ExperimentConfig& cfg_in) {
    namespace fs = std::filesystem;
    const auto t_start = std::chrono::steady_clock::now();

    ExperimentConfig cfg = cfg_in;
    bool have_final = false;
    for (double t : cfg.stepper.store_states_at)
        if (t == cfg.stepper.t_end) have_final = true;
    if (!have_final) cfg.stepper.store_states_at.push_back(cfg.stepper.t_end);

    RunResult res = run_experiment_in_memory(cfg);
    res.dir = fs::path(cfg.output_dir);
    fs::create_directories(res.dir);

    {
        std::ofstream os(res.dir / "config.json");
        os << to_json_string(cfg_in) << "\n";
    }
    save_state(res.initial, res.dir / "initial.snap");

    const TrajectoryRecord& rec = res.record;
    auto col = [&](const std::string& name) -> const std::vector<double>& {
        auto it = rec.series.find(name);
        if (it == rec.series.end())
            throw std::runtime_error("missing series '" + name + "' in trajectory record");
        return it->second;
    };

    std::vector<std::string> outputs;
    auto emit = [&](const std::string& file, const std::string& comment,
                    const std::vector<std::string>& names,
                    const std::vector<const std::vector<double>*>& cols) {
        std::vector<std::vector<double>> rows(rec.times.size());
        for (std::size_t i = 0; i < rec.times.size(); ++i) {
            rows[i].push_back(rec.times[i]);
            for (const auto* c : cols) rows[i].push_back((*c)[i]);
        }
        std::vector<std::string> header = {"t"};
        header.insert(header.end(), names.begin(), names.end());
        write_csv(res.dir / file, comment, header, rows);
        outputs.push_back(file);
    };

    if (enabled(cfg, "energy"))
        emit("energy.csv", "E(t) = ||u||_2^2 + ||B||_2^2 (box units)", {"E"}, {&col("E")});
    if (enabled(cfg, "derivative:1") || enabled(cfg, "derivative:2")) {
        std::vector<std::string> names;
        std::vector<const std::vector<double>*> cols;
        for (int m : {1, 2}) {
            const std::string key = "lambda" + std::to_string(m);
            if (rec.series.count(key)) {
                names.push_back("||Lambda^" + std::to_string(m) + " (u,B)||_2^2");
                cols.push_back(&col(key));
            }
        }
        emit("derivatives.csv", "||Lambda^m u||_2^2 + ||Lambda^m B||_2^2 per m", names, cols);
    }
    if (enabled(cfg, "difference"))
        emit("difference.csv",
             "D = (u - v, B - w) vs the heat flow from the same data; ||D||_2^2 and heat energy",
             {"||D||_2^2", "E_heat"}, {&col("D_l2sq"), &col("E_heat")});
    if (enabled(cfg, "gevrey")) {
        // ratio = M_r * tau^{2(gamma+r)} with gamma from the energy fit
        // of this very run (the self-consistent choice).
        std::vector<double> ratio(rec.times.size(),
                                  std::numeric_limits<double>::quiet_NaN());
        if (rec.series.count("E")) {
            try {
                const DecayFit efit =
                    fit_exponent(rec.times, col("E"), cfg.window_for("energy"));
                for (std::size_t i = 0; i < ratio.size(); ++i)
                    ratio[i] = col("M_r")[i] *
                               std::pow(col("tau")[i], 2.0 * (efit.exponent + cfg.gevrey.r));
            } catch (const std::invalid_argument&) {
                // window too small for a fit; leave NaN
            }
        }
        std::vector<double> tau_est(rec.times.size(),
                                    std::numeric_limits<double>::quiet_NaN());
        if (rec.series.count("tau_est")) tau_est = col("tau_est");
        emit("gevrey.csv",
             "Gevrey norms at tau(t) = sqrt(tau0^2 + alpha t); ratio = M_r tau^{2(gamma+r)}",
             {"tau", "J_r", "H_r", "G_r", "K_r", "N_r", "M_r", "ratio", "tau_est",
              "resolved_flag"},
             {&col("tau"), &col("J_r"), &col("H_r"), &col("G_r"), &col("K_r"), &col("N_r"),
              &col("M_r"), &ratio, &tau_est, &col("resolved")});
    }
    if (enabled(cfg, "weighted-moment"))
        emit("wmoment.csv",
             "integral |x - x_c| (|u|^2 + |B|^2) dx and outer-shell energy fraction",
             {"wmoment", "boundary_frac"}, {&col("wmoment"), &col("boundary_frac")});
    if (enabled(cfg, "ball"))
        emit("ball.csv", "spectral energy inside |k| <= g(t), g^2 = gamma/(2(t+1))",
             {"g", "ball"}, {&col("ball_g"), &col("ball")});
    if (enabled(cfg, "moments")) {
        std::vector<std::string> names;
        std::vector<const std::vector<double>*> cols;
        for (const char* base : {"sA_", "sC_"}) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const std::string key = base + std::to_string(i) + std::to_string(j);
                    names.push_back(key);
                    cols.push_back(&col(key));
                }
            }
        }
        emit("sij.csv",
             "integrands of A~ (int u_i u_j - B_i B_j dx) and C~ (int u_i B_j - B_i u_j dx)",
             names, cols);
    }
    if (enabled(cfg, "phi") && rec.series.count("E")) {
        const PhiSeries phi = phi_integral(rec.times, col("E"));
        std::vector<std::vector<double>> rows(rec.times.size());
        for (std::size_t i = 0; i < rec.times.size(); ++i)
            rows[i] = {rec.times[i], phi.phi[i]};
        write_csv(res.dir / "phi.csv", "Phi(t) = int_0^t E(s) ds (trapezoid over snapshots)",
                  {"t", "Phi"}, rows);
        outputs.push_back("phi.csv");
    }

    {
        const SolenoidalState* fin = rec.stored_state_at(cfg.stepper.t_end);
        if (!fin) throw std::runtime_error("run_experiment: final state missing from record");
        CheckpointMeta meta{cfg.stepper.dt,
                            cfg.stepper.scheme == Scheme::IfRk4 ? "if-rk4" : "if-euler",
                            rec.steps_taken, cfg.stepper.t_end};
        save_checkpoint(*fin, meta, res.dir / "final.ckpt");
        outputs.push_back("final.ckpt");
    }

    const auto t_stop = std::chrono::steady_clock::now();
    json manifest;
    manifest["config_hash"] = config_hash(cfg_in);
    manifest["code_version"] = kVersion;
    manifest["wall_time_seconds"] =
        std::chrono::duration<double>(t_stop - t_start).count();
    manifest["steps_taken"] = rec.steps_taken;
    manifest["snapshots"] = rec.times.size();
    manifest["outputs"] = outputs;
    manifest["completed"] = true;
    {
        std::ofstream os(res.dir / "manifest.json");
        os << manifest.dump(2) << "\n";
    }
    return res;
}

void write_csv(const std::filesystem::path& path, const std::string& comment,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    if (!comment.empty()) os << "# " << comment << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(
    const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::vector<double> t, v;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        try {
            const double a = std::stod(line.substr(0, comma));
            const double b = std::stod(line.substr(comma + 1));
            t.push_back(a);
            v.push_back(b);
        } catch (const std::exception&) {
            // header row
        }
    }
    return {std::move(t), std::move(v)};
}

}  // namespace hallmhd
