// Batch front door: capacity curves, coherent-information sweeps,
// perturbation sign reports and oracle verification runs.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gausscap/coherent_info.hpp"
#include "gausscap/covariance.hpp"
#include "gausscap/entropy.hpp"
#include "gausscap/fock.hpp"
#include "gausscap/perturbation.hpp"

using namespace gausscap;

namespace {

// 12 significant digits, scientific below 1e-4 for readability
std::string fmt_number(double v) {
    char buf[64];
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    if (std::abs(v) < 1e-4) {
        std::snprintf(buf, sizeof(buf), "%.11e", v);
    } else {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
    }
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write_csv(std::ostream& os) const {
        for (size_t i = 0; i < header.size(); ++i) {
            os << (i ? "," : "") << csv_quote(header[i]);
        }
        os << "\n";
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                os << (i ? "," : "") << csv_quote(row[i]);
            }
            os << "\n";
        }
    }

    void write_jsonl(std::ostream& os) const {
        for (const auto& row : rows) {
            nlohmann::ordered_json obj;
            for (size_t i = 0; i < header.size(); ++i) {
                const std::string& cell = row[i];
                if (cell.empty()) {
                    obj[header[i]] = nullptr;
                    continue;
                }
                try {
                    size_t pos = 0;
                    const double v = std::stod(cell, &pos);
                    if (pos == cell.size() && std::isfinite(v)) {
                        obj[header[i]] = v;
                    } else {
                        obj[header[i]] = cell;
                    }
                } catch (...) {
                    obj[header[i]] = cell;
                }
            }
            os << obj.dump() << "\n";
        }
    }
};

int thread_budget(size_t rows) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("GAUSSCAP_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    if (rows < n) n = static_cast<unsigned>(rows ? rows : 1);
    return static_cast<int>(n);
}

// evaluates fn(i) for i in [0, count) on the thread budget; results indexed
template <typename Fn>
void parallel_rows(size_t count, Fn&& fn) {
    const int workers = thread_budget(count);
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next++; i < count; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

void emit(const Table& table, const std::string& format, const std::string& out_path) {
    std::ostringstream buf;
    if (format == "jsonl") {
        table.write_jsonl(buf);
    } else {
        table.write_csv(buf);
    }
    if (out_path.empty()) {
        std::cout << buf.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        f << buf.str();
    }
}

struct SpecArg {
    std::vector<int> k, l;
    std::complex<double> c;
    std::string text;
};

SpecArg parse_spec(const std::string& s) {
    SpecArg out;
    out.text = s;
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3) {
        throw std::invalid_argument("spec must be k:l:c, e.g. 2,0:1,1:1 or 1:1:0,1");
    }
    auto ints = [](const std::string& t) {
        std::vector<int> v;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
        return v;
    };
    out.k = ints(parts[0]);
    out.l = ints(parts[1]);
    std::vector<double> cs;
    {
        std::stringstream ss(parts[2]);
        std::string item;
        while (std::getline(ss, item, ',')) cs.push_back(std::stod(item));
    }
    if (cs.empty() || cs.size() > 2) {
        throw std::invalid_argument("spec amplitude must be re or re,im");
    }
    out.c = std::complex<double>(cs[0], cs.size() == 2 ? cs[1] : 0.0);
    return out;
}

int run_capacity(const std::vector<double>& etas, const std::vector<double>& noises,
                 const std::string& format, const std::string& out_path) {
    Table t;
    t.header = {"eta", "n_noise", "capacity_bits", "status"};
    struct Job { double eta, nn; };
    std::vector<Job> jobs;
    for (double e : etas)
        for (double n : noises) jobs.push_back({e, n});
    t.rows.resize(jobs.size());
    std::atomic<bool> any_error{false};
    parallel_rows(jobs.size(), [&](size_t i) {
        const auto& j = jobs[i];
        std::vector<std::string> row{fmt_number(j.eta), fmt_number(j.nn), "", "ok"};
        try {
            row[2] = fmt_number(capacity_conjecture(ChannelParams(j.eta, j.nn)));
        } catch (const std::exception& e) {
            row[3] = std::string("error: ") + e.what();
            any_error = true;
        }
        t.rows[i] = std::move(row);
    });
    emit(t, format, out_path);
    return any_error ? 1 : 0;
}

int run_cinfo(const std::vector<double>& etas, const std::vector<double>& noises,
              const std::vector<double>& energies, const std::vector<double>& xs,
              const std::string& format, const std::string& out_path) {
    Table t;
    t.header = {"eta", "n_noise", "energy", "x", "ic_bits", "dic_dx", "status"};
    struct Job { double eta, nn, e, x; };
    std::vector<Job> jobs;
    for (double eta : etas)
        for (double nn : noises)
            for (double e : energies)
                for (double x : xs) jobs.push_back({eta, nn, e, x});
    t.rows.resize(jobs.size());
    std::atomic<bool> any_error{false};
    parallel_rows(jobs.size(), [&](size_t i) {
        const auto& j = jobs[i];
        std::vector<std::string> row{fmt_number(j.eta), fmt_number(j.nn),
                                     fmt_number(j.e), fmt_number(j.x), "", "", "ok"};
        try {
            const ChannelParams p(j.eta, j.nn);
            const GaussianInputParams in(j.e, j.x);
            const double ic = gaussian_coherent_info(p, in).value;
            row[4] = fmt_number(ic);
            if (j.x == 1.0) {
                // cross-column consistency: the x=1 column is the thermal path
                const double therm = thermal_coherent_info(p, ThermalSpec(j.e - 0.5)).value;
                if (std::abs(ic - therm) > 1e-9) {
                    throw std::logic_error("thermal consistency check failed in writer");
                }
            }
            try {
                row[5] = fmt_number(dIc_dx(p, in));
            } catch (const std::domain_error&) {
                row[5] = "";  // singular pure-state direction
            }
        } catch (const std::exception& e) {
            row[6] = std::string("error: ") + e.what();
            any_error = true;
        }
        t.rows[i] = std::move(row);
    });
    emit(t, format, out_path);
    return any_error ? 1 : 0;
}

int run_perturb(const std::vector<std::string>& specs, const std::vector<double>& n_means,
                const std::vector<double>& etas, const std::vector<double>& noises,
                double epsilon, const std::string& format, const std::string& out_path) {
    Table t;
    t.header = {"spec", "n_mean", "eta", "n_noise", "ds_out_bits",
                "ds_joint_bits", "dic_bits", "sign", "above_threshold", "status"};
    struct Job { std::string spec; double n, eta, nn; };
    std::vector<Job> jobs;
    for (const auto& s : specs)
        for (double n : n_means)
            for (double eta : etas)
                for (double nn : noises) jobs.push_back({s, n, eta, nn});
    t.rows.resize(jobs.size());
    std::atomic<bool> any_error{false};
    parallel_rows(jobs.size(), [&](size_t i) {
        const auto& j = jobs[i];
        std::vector<std::string> row{j.spec,          fmt_number(j.n), fmt_number(j.eta),
                                     fmt_number(j.nn), "",              "",
                                     "",               "",              "",
                                     "ok"};
        try {
            const SpecArg sa = parse_spec(j.spec);
            const PerturbationSpec spec(sa.k, sa.l, sa.c, epsilon);
            const ChannelParams p(j.eta, j.nn);
            const ShiftReport rep = coherent_info_shift(spec, j.n, p);
            row[4] = fmt_number(rep.d_s_out / kLn2);
            row[5] = fmt_number(rep.d_s_joint / kLn2);
            row[6] = fmt_number(rep.d_ic / kLn2);
            row[7] = rep.d_ic < 0 ? "-" : (rep.d_ic > 0 ? "+" : "0");
            if (j.eta < 1.0) {
                row[8] = j.n > noise_threshold_mean_photon(p) ? "yes" : "no";
            }
        } catch (const std::exception& e) {
            row[9] = std::string("error: ") + e.what();
            any_error = true;
        }
        t.rows[i] = std::move(row);
    });
    emit(t, format, out_path);
    return any_error ? 1 : 0;
}

struct SuiteResult {
    std::string name;
    bool pass;
    std::string detail;
};

SuiteResult verify_gaussian() {
    double worst = 0.0;
    for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double nn : {0.0, 0.1, 0.5, 1.0}) {
            for (double n : {0.5, 1.0, 5.0, 50.0}) {
                const ChannelParams p(eta, nn);
                const auto js = joint_spectrum(p, ThermalSpec(n));
                const auto nus = symplectic_eigenvalues(joint_output_cov(p, ThermalSpec(n)));
                worst = std::max({worst,
                                  std::abs(nus[0] - (std::max(js.n_a, js.n_b) + 0.5)),
                                  std::abs(nus[1] - (std::min(js.n_a, js.n_b) + 0.5))});
                const double g =
                    gaussian_coherent_info(p, GaussianInputParams(n + 0.5, 1.0)).value;
                worst = std::max(worst,
                                 std::abs(g - thermal_coherent_info(p, ThermalSpec(n)).value));
            }
        }
    }
    return {"gaussian", worst <= 1e-9, "max deviation " + fmt_number(worst) + " (tol 1e-9)"};
}

SuiteResult verify_lemma(int cutoff) {
    double worst = 0.0;
    for (auto [k, m] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 1}}) {
        worst = std::max(worst, lemma_check(k, m, 1.0, ChannelParams(0.6, 0.2), cutoff));
    }
    return {"lemma", worst <= 1e-6,
            "max deviation " + fmt_number(worst) + " at cutoff " + std::to_string(cutoff) +
                " (tol 1e-6)"};
}

SuiteResult verify_perturbation(int cutoff) {
    const std::vector<double> eps{0.02, 0.01, 0.005};
    const PerturbationSpec spec({1}, {1}, 1.0, 1.0);
    double worst = 0.0;
    const auto c_out = entropy_shift_oracle(spec, 1.0, ChannelParams(0.5, 0.25), eps, cutoff);
    const auto c_joint = entropy_shift_oracle(spec, 1.0, ChannelParams(0.8, 0.0), eps, cutoff);
    worst = std::max(worst, std::abs(c_out.input - input_entropy_shift(spec, 1.0)) /
                                std::abs(input_entropy_shift(spec, 1.0)));
    const double co = output_entropy_shift(spec, 1.0, ChannelParams(0.5, 0.25));
    worst = std::max(worst, std::abs(c_out.output - co) / std::abs(co));
    const double cj = joint_entropy_shift(spec, 1.0, ChannelParams(0.8, 0.0));
    worst = std::max(worst, std::abs(c_joint.joint - cj) / std::abs(cj));

    const int dq = std::min(cutoff, 44);
    const auto rho = thermal_fock(1.0, dq);
    const auto ps = perturbed_state(PerturbationSpec({1}, {1}, 1.0, 0.0), 1.0, dq,
                                    default_quadrature(1.0, dq));
    const double tq = trace_quotient(ps.phi, rho);
    const double mt = moment_trace(PerturbationSpec({1}, {1}, 1.0, 0.0), 1.0);
    const double tq_rel = std::abs(tq - mt) / mt;
    const bool pass = worst <= 1e-2 && tq_rel <= 1e-4;
    return {"perturbation", pass,
            "max shift rel dev " + fmt_number(worst) + " (tol 1e-2), trace rel dev " +
                fmt_number(tq_rel) + " (tol 1e-4)"};
}

int run_verify(const std::string& suite, int cutoff) {
    std::vector<SuiteResult> results;
    if (suite == "gaussian" || suite == "all") results.push_back(verify_gaussian());
    if (suite == "lemma" || suite == "all") results.push_back(verify_lemma(cutoff));
    if (suite == "perturbation" || suite == "all") results.push_back(verify_perturbation(cutoff));
    if (results.empty()) {
        std::cerr << "unknown suite '" << suite
                  << "' (expected gaussian, lemma, perturbation or all)\n";
        return 1;
    }
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "gausscap: coherent information and conjectured quantum capacity of the "
        "lossy bosonic channel with additive classical Gaussian noise"};
    app.require_subcommand(1);

    std::vector<double> etas{0.5};
    std::vector<double> noises{0.0};
    std::vector<double> n_means{1.0};
    std::vector<double> energies{1.5};
    std::vector<double> xs{1.0};
    std::vector<std::string> specs;
    double epsilon = 0.01;
    int cutoff = 40;
    std::string format = "csv";
    std::string out_path;

    std::string config_path;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "jsonl"}));
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--config", config_path,
                        "plain key=value configuration file; explicit flags override");
    };

    auto* cap = app.add_subcommand("capacity",
                                   "conjectured capacity over a channel grid; "
                                   "columns: eta,n_noise,capacity_bits,status");
    cap->add_option("--eta", etas, "transmissivity grid")->delimiter(',');
    cap->add_option("--n-noise", noises, "noise photon grid")->delimiter(',');
    add_common(cap);

    auto* ci = app.add_subcommand("cinfo",
                                  "coherent information sweep; columns: "
                                  "eta,n_noise,energy,x,ic_bits,dic_dx,status");
    ci->add_option("--eta", etas, "transmissivity grid")->delimiter(',');
    ci->add_option("--n-noise", noises, "noise photon grid")->delimiter(',');
    ci->add_option("--energy", energies, "input energy grid")->delimiter(',');
    ci->add_option("--x", xs, "shape parameter grid, x in (0,1]")->delimiter(',');
    add_common(ci);

    auto* pe = app.add_subcommand(
        "perturb",
        "second-order coherent-information shifts; columns: spec,n_mean,eta,"
        "n_noise,ds_out_bits,ds_joint_bits,dic_bits,sign,above_threshold,status");
    pe->add_option("--spec", specs, "perturbation k:l:c (c as re or re,im), e.g. 2,0:1,1:1")
        ->required();
    pe->add_option("--n-mean", n_means, "thermal mean photon grid")->delimiter(',');
    pe->add_option("--eta", etas, "transmissivity grid")->delimiter(',');
    pe->add_option("--n-noise", noises, "noise photon grid")->delimiter(',');
    pe->add_option("--epsilon", epsilon, "perturbation strength");
    add_common(pe);

    std::string suite = "all";
    auto* ve = app.add_subcommand("verify", "oracle verification suites");
    ve->add_option("suite", suite, "gaussian | lemma | perturbation | all");
    ve->add_option("--cutoff", cutoff, "Fock cutoff for oracle suites");
    add_common(ve);

    // key=value config handling: file keys become flags unless already given
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        for (size_t i = 0; i + 1 < args.size(); ++i) {
            if (args[i] != "--config") continue;
            const std::string path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            std::ifstream f(path);
            if (!f) throw std::runtime_error("cannot read config file: " + path);
            std::string line;
            while (std::getline(f, line)) {
                const auto hash = line.find('#');
                if (hash != std::string::npos) line.erase(hash);
                const auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                auto trim = [](std::string s) {
                    const auto a = s.find_first_not_of(" \t\r");
                    const auto b = s.find_last_not_of(" \t\r");
                    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
                };
                const std::string key = "--" + trim(line.substr(0, eq));
                const std::string value = trim(line.substr(eq + 1));
                if (key == "--" || value.empty()) continue;
                bool overridden = false;
                for (const auto& a : args) overridden = overridden || a == key;
                if (!overridden) {
                    args.push_back(key);
                    args.push_back(value);
                }
            }
            break;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        std::reverse(args.begin(), args.end());  // CLI11 parses from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage and config problems exit 1
    }

    try {
        if (cap->parsed()) return run_capacity(etas, noises, format, out_path);
        if (ci->parsed()) return run_cinfo(etas, noises, energies, xs, format, out_path);
        if (pe->parsed())
            return run_perturb(specs, n_means, etas, noises, epsilon, format, out_path);
        if (ve->parsed()) return run_verify(suite, cutoff);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
