#include "betamorph/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "betamorph/errors.hpp"
#include "betamorph/report.hpp"
#include "betamorph/version.hpp"

namespace betamorph {

namespace {

ReportFormat to_format(const std::string& s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "csv") return ReportFormat::Csv;
    return ReportFormat::Text;
}

char to_map_letter(const std::string& s) { return s == "T" ? 'T' : 'S'; }

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw InputError("cannot open output file '" + out_path + "'");
    os << text;
}

std::vector<std::string> read_beta_list(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open beta list file '" + path + "'");
    std::vector<std::string> specs;
    std::string line;
    while (std::getline(is, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.empty() || line[0] == '#') continue;
        specs.push_back(line);
    }
    if (specs.empty()) throw InputError("beta list file '" + path + "' holds no specs");
    return specs;
}

struct CommonOpts {
    std::string beta;
    std::string format = "text";
    std::string out;
    int digits = 12;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--beta", o.beta,
                    "beta spec: multinacci:N | rational:P/Q | poly:c0,c1,... | c0,c1,...");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
    cmd->add_option("--digits", o.digits, "significant decimal digits in reports")
        ->check(CLI::Range(1, 40))
        ->capture_default_str();
}

void require_beta(const CommonOpts& o) {
    if (o.beta.empty()) throw InputError("--beta is required");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"exact analyzer for the positive and negative beta-transformations"};
    app.name("betamorph");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("betamorph ") + version::kArtifact);

    CommonOpts certify_o, verify_o, spectrum_o, markov_o, orbit_o;
    std::string beta_list_path;
    int jobs = 0, forced_iterate = 0;
    int verify_level = 0;
    int spectrum_n = 0;
    std::string spectrum_map = "both", markov_map = "S", orbit_map = "T";
    int markov_depth = 24, orbit_depth = 16;

    CLI::App* c_certify = app.add_subcommand(
        "certify", "decide measurable isomorphism of the two maps for a given beta");
    add_common(c_certify, certify_o);
    c_certify->add_option("--beta-list", beta_list_path,
                          "file with one beta spec per line; certified concurrently");
    c_certify->add_option("--jobs", jobs, "worker threads for --beta-list (default: auto)")
        ->check(CLI::Range(1, 64));
    c_certify->add_option("--n", forced_iterate,
                          "compare the n-th powers instead of the regime default")
        ->check(CLI::Range(1, 18));

    CLI::App* c_verify =
        app.add_subcommand("verify", "run the self-check bundle for a given beta");
    add_common(c_verify, verify_o);
    c_verify->add_option("--m", verify_level, "decomposition level override")
        ->check(CLI::Range(1, 16));

    CLI::App* c_spectrum =
        app.add_subcommand("spectrum", "preimage-count spectra of the n-th powers");
    add_common(c_spectrum, spectrum_o);
    c_spectrum->add_option("--n", spectrum_n, "power to decompose (default: regime iterate)")
        ->check(CLI::Range(1, 18));
    c_spectrum->add_option("--map", spectrum_map, "T, S or both")
        ->check(CLI::IsMember({"T", "S", "both"}))
        ->capture_default_str();

    CLI::App* c_markov =
        app.add_subcommand("markov", "detect a Markov partition and report its matrix data");
    add_common(c_markov, markov_o);
    c_markov->add_option("--map", markov_map, "T or S")
        ->check(CLI::IsMember({"T", "S"}))
        ->capture_default_str();
    c_markov->add_option("--depth", markov_depth, "orbit closure search depth")
        ->check(CLI::Range(1, 200))
        ->capture_default_str();

    CLI::App* c_orbit = app.add_subcommand("orbit", "orbit of 1 under one map");
    add_common(c_orbit, orbit_o);
    c_orbit->add_option("--map", orbit_map, "T or S")
        ->check(CLI::IsMember({"T", "S"}))
        ->capture_default_str();
    c_orbit->add_option("--depth", orbit_depth, "number of iterates")
        ->check(CLI::Range(1, 200))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_certify)) {
            if (!beta_list_path.empty() && !certify_o.beta.empty())
                throw InputError("--beta and --beta-list are mutually exclusive");
            const ReportFormat fmt = to_format(certify_o.format);

            if (!beta_list_path.empty()) {
                const std::vector<std::string> specs = read_beta_list(beta_list_path);
                std::vector<Json> results(specs.size());
                std::vector<int> codes(specs.size(), 0);

                unsigned hw = std::thread::hardware_concurrency();
                if (hw == 0) hw = 1;
                std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                               : std::min<std::size_t>(hw, 8);
                workers = std::min(workers, specs.size());

                auto run_range = [&](std::size_t w) {
                    for (std::size_t i = w; i < specs.size(); i += workers) {
                        try {
                            FieldPtr f = parse_beta_spec(specs[i]);
                            results[i] =
                                certify_report(f, specs[i], certify_o.digits, forced_iterate);
                        } catch (const InputError& e) {
                            results[i] = Json{{"command", "certify"},
                                              {"beta", Json{{"spec", specs[i]}}},
                                              {"error", e.what()}};
                            codes[i] = 2;
                        } catch (const std::exception& e) {
                            results[i] = Json{{"command", "certify"},
                                              {"beta", Json{{"spec", specs[i]}}},
                                              {"error", e.what()}};
                            codes[i] = 3;
                        }
                    }
                };
                std::vector<std::thread> pool;
                pool.reserve(workers);
                for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
                for (std::thread& t : pool) t.join();

                emit(render_many(results, fmt), certify_o.out);
                return *std::max_element(codes.begin(), codes.end());
            }

            require_beta(certify_o);
            FieldPtr f = parse_beta_spec(certify_o.beta);
            emit(render(certify_report(f, certify_o.beta, certify_o.digits, forced_iterate), fmt),
                 certify_o.out);
            return 0;
        }

        if (app.got_subcommand(c_verify)) {
            require_beta(verify_o);
            FieldPtr f = parse_beta_spec(verify_o.beta);
            Json j = verify_report(f, verify_o.beta, verify_o.digits, verify_level);
            emit(render(j, to_format(verify_o.format)), verify_o.out);
            return j["all_ok"].get<bool>() ? 0 : 1;
        }

        if (app.got_subcommand(c_spectrum)) {
            require_beta(spectrum_o);
            FieldPtr f = parse_beta_spec(spectrum_o.beta);
            int n = spectrum_n;
            if (n == 0) {
                BetaClass cls = classify_beta(f);
                n = cls.kind == BetaClass::Kind::SubGolden ? 3 : cls.n;
            }
            const char which = spectrum_map == "both" ? 'B' : to_map_letter(spectrum_map);
            emit(render(spectrum_report(f, spectrum_o.beta, spectrum_o.digits, n, which),
                        to_format(spectrum_o.format)),
                 spectrum_o.out);
            return 0;
        }

        if (app.got_subcommand(c_markov)) {
            require_beta(markov_o);
            FieldPtr f = parse_beta_spec(markov_o.beta);
            emit(render(markov_report(f, markov_o.beta, markov_o.digits,
                                      to_map_letter(markov_map), markov_depth),
                        to_format(markov_o.format)),
                 markov_o.out);
            return 0;
        }

        if (app.got_subcommand(c_orbit)) {
            require_beta(orbit_o);
            FieldPtr f = parse_beta_spec(orbit_o.beta);
            emit(render(orbit_report(f, orbit_o.beta, orbit_o.digits, to_map_letter(orbit_map),
                                     orbit_depth),
                        to_format(orbit_o.format)),
                 orbit_o.out);
            return 0;
        }

        throw Error("no subcommand dispatched");
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace betamorph
