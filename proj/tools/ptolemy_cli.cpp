// Command-line front door: triangulation inspection, quantum dilogarithm
// tables, constrained operator systems, pentagon verification, and
// mapping-class representation words.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "ptolemy/intertwiner.hpp"
#include "ptolemy/io.hpp"
#include "ptolemy/opcalc.hpp"
#include "ptolemy/qdilog.hpp"

using namespace ptolemy;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInputError = 2;

std::string resolve_input(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path)) return path;
    if (const char* dir = std::getenv("PTOLEMY_FIXTURE_DIR")) {
        std::string alt = std::string(dir) + "/" + path;
        if (fs::exists(alt)) return alt;
    }
    return path;  // let the open fail with a clear message
}

tri::LabeledTriangulation load_triangulation(const std::string& path) {
    auto T = io::triangulation_from_json(io::load_json_file(resolve_input(path)));
    if (T.signature().punctures == 1)
        std::cerr << "warning: once-punctured surface (n = 1); representation-level "
                     "results assume n > 1\n";
    return T;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

struct Range {
    double lo = -3.0, hi = 3.0;
};

Range parse_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) throw InputError("range must look like '-3..3'");
    try {
        return Range{std::stod(s.substr(0, dots)), std::stod(s.substr(dots + 2))};
    } catch (const std::exception&) {
        throw InputError("cannot parse range '" + s + "'");
    }
}

json error_object(const std::string& kind, const std::string& what) {
    return json{{"error", kind}, {"detail", what}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ideal triangulations, quantum dilogarithms and flip intertwiners"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "json";
    app.add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    std::uint64_t seed = 20260101;
    app.add_option("--seed", seed, "seed for randomized suites");
    int workers = 1;
    app.add_option("--workers", workers, "worker pool size (default 1, deterministic)");

    // ---- surface ----
    auto* surface = app.add_subcommand("surface", "triangulation combinatorics");
    std::string trig_path, trig_to, out_path;
    int flip_arc = 1, max_depth = 6;

    auto* s_info = surface->add_subcommand("info", "counts, corner cycles, valences");
    s_info->add_option("input", trig_path, "triangulation JSON")->required();

    auto* s_flip = surface->add_subcommand("flip", "flip one arc");
    s_flip->add_option("input", trig_path)->required();
    s_flip->add_option("--arc", flip_arc, "arc label (1-based)")->required();
    s_flip->add_option("-o,--output", out_path, "write result here instead of stdout");

    auto* s_eps = surface->add_subcommand("eps", "exchange matrix and valences");
    s_eps->add_option("input", trig_path)->required();

    auto* s_path = surface->add_subcommand("path", "breadth-first flip path search");
    s_path->add_option("--from", trig_path)->required();
    s_path->add_option("--to", trig_to)->required();
    s_path->add_option("--max-depth", max_depth);

    // ---- qd ----
    auto* qdcmd = app.add_subcommand("qd", "quantum dilogarithm evaluation");
    int lambda = -1;
    double hbar = 1.0;
    std::string func = "F", xr = "-3..3", yr = "-3..3";
    double at_x = 0.0, at_y = 0.0, q_mod = 0.5, q_arg = 0.0;
    int steps = 21, phi_sign = 1;
    double zre = 0.0, zim = 0.0;

    auto* q_eval = qdcmd->add_subcommand("eval", "evaluate one function at one point");
    q_eval->add_option("--func", func, "psi | phi | phi-i | F")
        ->check(CLI::IsMember({"psi", "phi", "phi-i", "F"}));
    q_eval->add_option("--lambda", lambda)->check(CLI::IsMember({-1, 0, 1}));
    q_eval->add_option("--hbar", hbar);
    q_eval->add_option("--x", at_x);
    q_eval->add_option("--y", at_y);
    q_eval->add_option("--q-mod", q_mod);
    q_eval->add_option("--q-arg", q_arg);
    q_eval->add_option("--z-re", zre);
    q_eval->add_option("--z-im", zim);
    q_eval->add_option("--sign", phi_sign)->check(CLI::IsMember({-1, 1}));

    auto* q_table = qdcmd->add_subcommand("table", "F kernel on a grid of (x, y)");
    q_table->add_option("--lambda", lambda)->check(CLI::IsMember({-1, 0, 1}));
    q_table->add_option("--hbar", hbar);
    q_table->add_option("--x", xr, "x range, e.g. -3..3");
    q_table->add_option("--y", yr, "y range");
    q_table->add_option("--steps", steps, "samples per axis");

    // ---- heis ----
    auto* heiscmd = app.add_subcommand("heis", "constrained Heisenberg operators");
    auto* h_irrep = heiscmd->add_subcommand("irrep", "irreducible solution JSON dump");
    h_irrep->add_option("input", trig_path)->required();
    auto* h_check = heiscmd->add_subcommand("check", "verify relations and constraints");
    h_check->add_option("input", trig_path)->required();

    // ---- check ----
    auto* checkcmd = app.add_subcommand("check", "numerical verification suites");
    int grid_N = 1024;
    double grid_L = 12.0;
    int n_states = 5;
    double tol = 1e-3;
    bool refine = false;

    auto* c_phi = checkcmd->add_subcommand("phi-pentagon", "Phi^h pentagon on d=1");
    c_phi->add_option("--hbar", hbar);
    c_phi->add_option("--grid", grid_N);
    c_phi->add_option("--domain", grid_L);
    c_phi->add_option("--states", n_states);
    c_phi->add_option("--tolerance", tol);
    c_phi->add_flag("--refine", refine, "run the domain-doubling refinement ladder");

    auto* c_f = checkcmd->add_subcommand("f-pentagon", "F kernel pentagon on d=2");
    c_f->add_option("--lambda", lambda)->check(CLI::IsMember({-1, 0, 1}));
    c_f->add_option("--hbar", hbar);
    c_f->add_option("--grid", grid_N);
    c_f->add_option("--domain", grid_L);
    c_f->add_option("--states", n_states);
    c_f->add_option("--tolerance", tol);
    c_f->add_flag("--refine", refine);

    auto* c_rel = checkcmd->add_subcommand("relations", "flip/permutation relation suite");
    c_rel->add_option("input", trig_path)->required();
    c_rel->add_option("--lambda", lambda)->check(CLI::IsMember({-1, 0, 1}));
    c_rel->add_option("--hbar", hbar);
    c_rel->add_option("--grid", grid_N);
    c_rel->add_option("--tolerance", tol);

    // ---- mcg ----
    auto* mcgcmd = app.add_subcommand("mcg", "mapping class group words");
    auto* m_verify = mcgcmd->add_subcommand("verify", "check that a word closes");
    m_verify->add_option("input", trig_path, "word JSON")->required();
    auto* m_rho = mcgcmd->add_subcommand("rho", "representation element of a loop");
    m_rho->add_option("input", trig_path, "word JSON")->required();
    m_rho->add_option("--lambda", lambda)->check(CLI::IsMember({-1, 0, 1}));
    m_rho->add_option("--hbar", hbar);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << error_object("UsageError", e.what()).dump() << "\n";
        return kExitInputError;
    }

    try {
        if (*s_info) {
            auto T = load_triangulation(trig_path);
            json j;
            j["genus"] = T.signature().genus;
            j["punctures"] = T.signature().punctures;
            j["arcs"] = T.arc_count();
            j["triangles"] = int(T.triangles().size());
            json cycles = json::array();
            for (const auto& cyc : T.corner_cycles()) {
                json c = json::array();
                for (const auto& s : cyc) c.push_back(json::array({s.tri, s.side}));
                cycles.push_back(std::move(c));
            }
            j["corner_cycles"] = cycles;
            j["valences"] = T.valences();
            emit(j);
        } else if (*s_flip) {
            auto T = load_triangulation(trig_path);
            auto F = T.flipped(flip_arc - 1);
            json j = io::triangulation_to_json(F);
            if (out_path.empty())
                emit(j);
            else
                io::write_text_file(out_path, j.dump(2) + "\n");
        } else if (*s_eps) {
            auto T = load_triangulation(trig_path);
            auto em = tri::exchange_matrix(T);
            if (format == "csv") {
                std::ostringstream os;
                for (const auto& row : em.eps) {
                    for (std::size_t c = 0; c < row.size(); ++c)
                        os << row[c] << (c + 1 < row.size() ? "," : "");
                    os << "\n";
                }
                std::cout << os.str();
            } else {
                emit(io::exchange_to_json(em));
            }
        } else if (*s_path) {
            auto A = load_triangulation(trig_path);
            auto B = load_triangulation(trig_to);
            auto r = tri::find_path(A, B, max_depth);
            if (!r.word) {
                emit(json{{"found", false}, {"searched_radius", r.searched_radius}});
                return kExitVerificationFailure;
            }
            json j = io::word_to_json(*r.word);
            j["found"] = true;
            emit(j);
        } else if (*q_eval) {
            qd::cplx v;
            if (func == "psi")
                v = qd::psi_q(std::polar(q_mod, q_arg), qd::cplx(zre, zim));
            else if (func == "phi")
                v = qd::phi_hbar(hbar, qd::cplx(zre, zim));
            else if (func == "phi-i")
                v = qd::phi_ihbar(phi_sign, hbar, qd::cplx(zre, zim));
            else
                v = qd::F_kernel(qd::QDParams{lambda, hbar}, at_x, at_y);
            emit(json{{"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}});
        } else if (*q_table) {
            Range rx = parse_range(xr), ry = parse_range(yr);
            qd::QDParams P{lambda, hbar};
            if (format == "csv") {
                std::ostringstream os;
                os << "x,y,re_F,im_F,abs_F\n";
                for (int i = 0; i < steps; ++i)
                    for (int j = 0; j < steps; ++j) {
                        double x = rx.lo + (rx.hi - rx.lo) * i / (steps - 1);
                        double y = ry.lo + (ry.hi - ry.lo) * j / (steps - 1);
                        qd::cplx v = qd::F_kernel(P, x, y);
                        os << io::format_double(x) << "," << io::format_double(y) << ","
                           << io::format_double(v.real()) << "," << io::format_double(v.imag())
                           << "," << io::format_double(std::abs(v)) << "\n";
                    }
                std::cout << os.str();
            } else {
                json recs = json::array();
                for (int i = 0; i < steps; ++i)
                    for (int j = 0; j < steps; ++j) {
                        double x = rx.lo + (rx.hi - rx.lo) * i / (steps - 1);
                        double y = ry.lo + (ry.hi - ry.lo) * j / (steps - 1);
                        qd::cplx v = qd::F_kernel(P, x, y);
                        recs.push_back(json{{"x", x},
                                            {"y", y},
                                            {"re", v.real()},
                                            {"im", v.imag()},
                                            {"abs", std::abs(v)}});
                    }
                emit(json{{"lambda", lambda}, {"hbar", hbar}, {"values", recs}});
            }
        } else if (*h_irrep) {
            auto T = load_triangulation(trig_path);
            auto em = tri::exchange_matrix(T);
            auto sys = heis::irreducible_solution(em, heis::echelon_reduce(em.valences));
            emit(io::operator_system_to_json(sys));
        } else if (*h_check) {
            auto T = load_triangulation(trig_path);
            auto em = tri::exchange_matrix(T);
            auto ech = heis::echelon_reduce(em.valences);
            auto sys = heis::irreducible_solution(em, ech);
            int A = em.size(), n = T.signature().punctures;
            bool ok = true;
            for (int i = 0; i < A; ++i)
                for (int j = 0; j < A; ++j) {
                    ok = ok && heis::commutator(sys.x[i], sys.x[j]) == Rat(0);
                    ok = ok && heis::commutator(sys.y[i], sys.y[j]) == Rat(0);
                    ok = ok && heis::commutator(sys.x[i], sys.y[j]) == Rat(em.eps[i][j]);
                }
            for (int p = 0; p < n && ok; ++p) {
                auto sx = heis::op_zero(sys.variables.size());
                auto sy = heis::op_zero(sys.variables.size());
                for (int i = 0; i < A; ++i) {
                    sx = heis::op_add(sx, heis::op_scale(Rat(em.valences[i][p]), sys.x[i]));
                    sy = heis::op_add(sy, heis::op_scale(Rat(em.valences[i][p]), sys.y[i]));
                }
                for (const auto& c : sx.mom) ok = ok && c.is_zero();
                for (const auto& c : sy.pos) ok = ok && c.is_zero();
            }
            emit(json{{"heisenberg_ok", ok}, {"constraints_ok", ok}, {"variables", sys.variables}});
            if (!ok) return kExitVerificationFailure;
        } else if (*c_phi) {
            auto states = op::random_test_states(1, n_states, seed, 1.8, 2.0, 0.35);
            for (auto& s : states)
                for (auto& b : s.boosts) b = std::abs(b);  // tame side of the P multiplier
            json ladder = json::array();
            bool ok = true;
            if (refine) {
                double prev = 1e300;
                for (auto [N, L] : std::vector<std::pair<int, double>>{
                         {grid_N / 2, grid_L}, {grid_N, 2 * grid_L}, {2 * grid_N, 4 * grid_L}}) {
                    auto rep = op::verify_phi_pentagon(hbar, op::Grid{1, N, L}, states, {}, workers);
                    ladder.push_back(io::residual_report_to_json(rep));
                    ok = ok && rep.max_residual < prev;
                    prev = rep.max_residual;
                }
            }
            auto rep = op::verify_phi_pentagon(hbar, op::Grid{1, grid_N, grid_L}, states, {}, workers);
            ok = ok && rep.max_residual <= tol;
            json j = io::residual_report_to_json(rep);
            j["tolerance"] = tol;
            j["pass"] = ok;
            if (refine) j["refinement"] = ladder;
            emit(j);
            if (!ok) return kExitVerificationFailure;
        } else if (*c_f) {
            auto states = op::random_test_states(2, n_states, seed, 1.8, 2.0, 0.35);
            for (auto& s : states)
                for (auto& b : s.boosts) b = -std::abs(b);
            qd::QDParams P{lambda, hbar};
            json ladder = json::array();
            bool ok = true;
            if (refine) {
                double prev = 1e300;
                for (auto [N, L] : std::vector<std::pair<int, double>>{
                         {grid_N / 2, grid_L}, {grid_N, 2 * grid_L}, {2 * grid_N, 4 * grid_L}}) {
                    auto rep = op::verify_F_pentagon(P, op::Grid{2, N, L}, states, {}, workers);
                    ladder.push_back(io::residual_report_to_json(rep));
                    ok = ok && rep.max_residual < prev;
                    prev = rep.max_residual;
                }
            }
            auto rep = op::verify_F_pentagon(P, op::Grid{2, grid_N, grid_L}, states, {}, workers);
            ok = ok && rep.max_residual <= tol;
            json j = io::residual_report_to_json(rep);
            j["tolerance"] = tol;
            j["pass"] = ok;
            if (refine) j["refinement"] = ladder;
            emit(j);
            if (!ok) return kExitVerificationFailure;
        } else if (*c_rel) {
            auto T = load_triangulation(trig_path);
            itw::RelationOptions opt;
            opt.grid_N = grid_N >= 1024 ? 512 : grid_N;
            opt.pentagon_tol = tol;
            opt.seed = seed;
            opt.workers = workers;
            auto rep = itw::verify_relation_suite(T, qd::QDParams{lambda, hbar}, opt);
            emit(io::relation_report_to_json(rep));
            if (!rep.all_ok) return kExitVerificationFailure;
        } else if (*m_verify) {
            auto base = std::filesystem::path(resolve_input(trig_path)).parent_path().string();
            auto w = io::word_from_json(io::load_json_file(resolve_input(trig_path)), base);
            tri::MappingClassLoop loop{w};
            bool ok = tri::verify_loop(loop);
            emit(json{{"closes", ok}});
            if (!ok) return kExitVerificationFailure;
        } else if (*m_rho) {
            auto base = std::filesystem::path(resolve_input(trig_path)).parent_path().string();
            auto w = io::word_from_json(io::load_json_file(resolve_input(trig_path)), base);
            auto el = itw::rho(tri::MappingClassLoop{w}, qd::QDParams{lambda, hbar});
            emit(io::representation_element_to_json(el));
        }
    } catch (const InputError& e) {
        std::cerr << error_object(e.kind, e.what()).dump() << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        std::cerr << error_object(e.kind, e.what()).dump() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << error_object("Error", e.what()).dump() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
