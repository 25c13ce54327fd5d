#include "pauliform/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "pauliform/canon.hpp"
#include "pauliform/ghz.hpp"
#include "pauliform/omega.hpp"
#include "pauliform/rng.hpp"

namespace pauliform::cli {

namespace {

using nlohmann::json;

json num(double x) { return json(round_sig12(x)); }

json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(json::array({num(std::real(m(i, j))), num(std::imag(m(i, j)))}));
        entries.push_back(std::move(row));
    }
    return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        throw input_error(where + ": expected an object with dim and entries");
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1 ||
        j["dim"].get<long long>() > 4096)
        throw input_error(where + ": dim must be a positive integer at most 4096");
    const int dim = j["dim"].get<int>();
    const json& entries = j["entries"];
    if (!entries.is_array() || static_cast<int>(entries.size()) != dim)
        throw input_error(where + ": entries must hold " + std::to_string(dim) + " rows");
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const json& row = entries[i];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw input_error(where + ": row " + std::to_string(i) + " must hold " +
                              std::to_string(dim) + " entries");
        for (int jj = 0; jj < dim; ++jj) {
            const json& cell = row[jj];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
                !cell[1].is_number())
                throw input_error(where + ": entry [" + std::to_string(i) + "][" +
                                  std::to_string(jj) + "] must be a [re, im] number pair");
            m(i, jj) = cplx{cell[0].get<double>(), cell[1].get<double>()};
        }
    }
    return m;
}

json classification_json(const OmegaClass& cls) {
    return json{{"kind", to_string(cls.kind)},
                {"residual_commute", num(cls.residual_commute)},
                {"residual_anticommute", num(cls.residual_anticommute)}};
}

json digest_json(const std::string& path, const ComplexMatrix& m) {
    return json{{"path", path}, {"dim", m.rows()}, {"frobenius_norm", num(m.frobenius_norm())}};
}

json form_json(const CanonicalForm& form) {
    json pair_blocks = json::array();
    for (const PairBlock& p : form.pair_blocks)
        pair_blocks.push_back(json{{"a", num(p.a)},
                                   {"b", num(p.b)},
                                   {"indices", json::array({p.index_pair[0], p.index_pair[1]})}});
    json singletons = json::array();
    for (const Singleton& s : form.singletons)
        singletons.push_back(
            json{{"alpha", num(s.alpha)}, {"beta", num(s.beta)}, {"index", s.index}});
    return json{{"dim", form.dim},
                {"pair_blocks", std::move(pair_blocks)},
                {"singletons", std::move(singletons)},
                {"transform", matrix_to_json(form.transform.matrix())}};
}

json verify_json(const VerifyReport& rep) {
    return json{{"pass", rep.pass},
                {"residual_a", num(rep.residual_a)},
                {"residual_b", num(rep.residual_b)},
                {"unitarity", num(rep.unitarity)},
                {"bound", num(rep.bound)},
                {"unitarity_bound", num(rep.unitarity_bound)}};
}

json commutation_json(const CommutationReport& rep) {
    json table = json::array();
    for (std::size_t k = 0; k < rep.index_pairs.size(); ++k)
        table.push_back(json{{"operators", json::array({rep.index_pairs[k][0],
                                                        rep.index_pairs[k][1]})},
                             {"residual", num(rep.residuals[k])},
                             {"bound", num(rep.bounds[k])}});
    return json{{"all_commute", rep.all_commute},
                {"max_residual", num(rep.max_residual)},
                {"table", std::move(table)}};
}

json assignment_json(const LhvAssignment& s) {
    json a = json::array();
    json b = json::array();
    for (double v : s.a_values) a.push_back(num(v));
    for (double v : s.b_values) b.push_back(num(v));
    return json{{"a_values", std::move(a)}, {"b_values", std::move(b)}};
}

json lhv_json(const LhvResult& res) {
    json satisfying = json::array();
    for (const LhvAssignment& s : res.satisfying) satisfying.push_back(assignment_json(s));
    json targets = json::array();
    for (double t : res.targets) targets.push_back(num(t));
    return json{{"total_assignments", res.total_assignments},
                {"satisfying_count", static_cast<long long>(res.satisfying.size())},
                {"satisfying", std::move(satisfying)},
                {"targets", std::move(targets)}};
}

json triviality_json(const TrivialityReport& rep) {
    json forms = json::array();
    for (const CanonicalForm& form : rep.forms) forms.push_back(form_json(form));
    json off = json::array();
    for (double worst : rep.off_tuple_max) off.push_back(num(worst));
    json tuples = json::array();
    for (const EffectiveSubproblem& sub : rep.pair_tuples) {
        json choice = json::array();
        for (int c : sub.block_choice) choice.push_back(c);
        json a_scales = json::array();
        json b_scales = json::array();
        json targets = json::array();
        for (double v : sub.a_scales) a_scales.push_back(num(v));
        for (double v : sub.b_scales) b_scales.push_back(num(v));
        for (double v : sub.targets) targets.push_back(num(v));
        tuples.push_back(json{{"block_choice", std::move(choice)},
                              {"a_scales", std::move(a_scales)},
                              {"b_scales", std::move(b_scales)},
                              {"targets", std::move(targets)},
                              {"lhv_total", sub.lhv_total},
                              {"lhv_satisfying", sub.lhv_satisfying}});
    }
    return json{{"parties", rep.parties},
                {"total_dim", rep.total_dim},
                {"site_forms", std::move(forms)},
                {"off_tuple_max", std::move(off)},
                {"off_tuple_bound", num(rep.off_tuple_bound)},
                {"block_diagonal", rep.block_diagonal},
                {"tuple_count", rep.tuple_count},
                {"singleton_tuple_count", rep.singleton_tuple_count},
                {"pair_tuples", std::move(tuples)},
                {"contradiction_possible", rep.contradiction_possible},
                {"contradiction_reproduced", rep.contradiction_reproduced}};
}

// Reports land on stdout unless --out names a file.
int emit(const json& report, int code, std::ostream& out, const std::string& out_path) {
    std::string text = report.dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw input_error("cannot write report to " + out_path);
        file << text;
    }
    return code;
}

std::vector<double> parse_targets(const std::string& spec) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t comma = std::min(spec.find(',', pos), spec.size());
        const std::string token = spec.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw input_error("targets: cannot parse '" + token + "' as a number");
        }
        pos = comma + 1;
    }
    return out;
}

HermitianOperator load_hermitian(const std::string& path, double tol) {
    return HermitianOperator(load_matrix(path), tol);
}

std::vector<std::pair<HermitianOperator, HermitianOperator>> load_pairs(
    const std::vector<std::string>& paths, double tol) {
    if (paths.size() < 6 || paths.size() % 2 != 0)
        throw input_error("--pairs needs an even number of files (A B per site), at least 6");
    std::vector<std::pair<HermitianOperator, HermitianOperator>> pairs;
    for (std::size_t i = 0; i < paths.size(); i += 2)
        pairs.push_back({load_hermitian(paths[i], tol), load_hermitian(paths[i + 1], tol)});
    return pairs;
}

json pair_digests(const std::vector<std::string>& paths,
                  const std::vector<std::pair<HermitianOperator, HermitianOperator>>& pairs) {
    json sites = json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i)
        sites.push_back(json{{"a", digest_json(paths[2 * i], pairs[i].first.matrix())},
                             {"b", digest_json(paths[2 * i + 1], pairs[i].second.matrix())}});
    return sites;
}

int cmd_analyze(const std::string& a_path, const std::string& b_path, double tol,
                std::ostream& out, const std::string& out_path) {
    const HermitianOperator a = load_hermitian(a_path, tol);
    const HermitianOperator b = load_hermitian(b_path, tol);
    const OmegaClass cls = classify(a, b, tol);
    const json rep{{"command", "analyze"},
                   {"inputs", json{{"a", digest_json(a_path, a.matrix())},
                                   {"b", digest_json(b_path, b.matrix())}}},
                   {"tol", num(tol)},
                   {"classification", classification_json(cls)},
                   {"verdict", "classified"}};
    return emit(rep, kExitOk, out, out_path);
}

int cmd_canon(const std::string& a_path, const std::string& b_path, double tol,
              std::ostream& out, const std::string& out_path) {
    const HermitianOperator a = load_hermitian(a_path, tol);
    const HermitianOperator b = load_hermitian(b_path, tol);
    const OmegaClass cls = classify(a, b, tol);
    json rep{{"command", "canon"},
             {"inputs", json{{"a", digest_json(a_path, a.matrix())},
                             {"b", digest_json(b_path, b.matrix())}}},
             {"tol", num(tol)},
             {"classification", classification_json(cls)}};
    if (cls.kind != OmegaKind::Anticommute && cls.kind != OmegaKind::Degenerate) {
        rep["verdict"] = "wrong_class";
        return emit(rep, kExitPrecondition, out, out_path);
    }
    const CanonicalForm form = canonicalize(a, b, tol);
    const VerifyReport vr = verify(a, b, form);
    rep["canonical_form"] = form_json(form);
    rep["verify"] = verify_json(vr);
    rep["verdict"] = vr.pass ? "pass" : "verify_failed";
    return emit(rep, vr.pass ? kExitOk : kExitVerify, out, out_path);
}

int cmd_ghz(const std::vector<std::string>& paths, double tol, std::ostream& out,
            const std::string& out_path) {
    const auto pairs = load_pairs(paths, tol);
    const GhzSet gs = build_ghz_set(pairs, tol);
    json rep{{"command", "ghz"},
             {"inputs", pair_digests(paths, pairs)},
             {"tol", num(tol)},
             {"parties", gs.parties},
             {"total_dim", gs.total_dim},
             {"product_sign",
              gs.product_sign ? json(num(*gs.product_sign)) : json(nullptr)},
             {"product_sign_residual", num(gs.product_sign_residual)}};
    const CommutationReport cr = check_mutual_commutation(gs);
    rep["commutation"] = commutation_json(cr);
    bool pass = cr.all_commute;
    const bool two_level = std::all_of(gs.local_dims.begin(), gs.local_dims.end(),
                                       [](int d) { return d == 2; });
    if (two_level) {
        std::vector<ComplexMatrix> ops = gs.operators;
        ops.push_back(gs.product_operator);
        try {
            json values = json::array();
            for (double v : joint_eigenvalues(ops, ghz_state(gs.parties), tol))
                values.push_back(num(v));
            rep["joint_eigenvalues"] = std::move(values);
        } catch (const std::runtime_error& e) {
            rep["joint_eigenvalues"] = nullptr;
            rep["joint_eigenvalue_note"] = e.what();
        }
    } else {
        const TrivialityReport tr = triviality_report(pairs, tol);
        rep["triviality"] = triviality_json(tr);
        pass = pass && tr.block_diagonal;
    }
    rep["verdict"] = pass ? "pass" : "verify_failed";
    return emit(rep, pass ? kExitOk : kExitVerify, out, out_path);
}

int cmd_lhv(const std::vector<std::string>& paths, const std::string& targets_spec, double tol,
            std::ostream& out, const std::string& out_path) {
    const auto pairs = load_pairs(paths, tol);
    const GhzSet gs = build_ghz_set(pairs, tol);
    const std::vector<double> targets = parse_targets(targets_spec);
    const LhvResult res = lhv_search(gs, targets, tol);
    const json rep{{"command", "lhv"},
                   {"inputs", pair_digests(paths, pairs)},
                   {"tol", num(tol)},
                   {"parties", gs.parties},
                   {"lhv", lhv_json(res)},
                   {"verdict", "counted"}};
    return emit(rep, kExitOk, out, out_path);
}

// Deterministic mixed block specs on a coarse value grid, dims 2 to 10.
BlockSpec drawn_spec(SeededRng& rng) {
    BlockSpec spec;
    const int n_pairs = static_cast<int>(rng.uniform_int(0, 4));
    const int max_singles = 10 - 2 * n_pairs;
    const int min_singles = n_pairs == 0 ? 2 : 0;
    const int n_singles =
        static_cast<int>(rng.uniform_int(min_singles, std::max(min_singles, max_singles)));
    auto grid = [&] { return 0.1 * static_cast<double>(rng.uniform_int(1, 30)); };
    for (int p = 0; p < n_pairs; ++p) spec.pairs.push_back({grid(), grid()});
    for (int s = 0; s < n_singles; ++s) {
        const std::uint64_t style = rng.uniform_int(0, 2);
        const double sign = rng.uniform_int(0, 1) ? 1.0 : -1.0;
        if (style == 0)
            spec.singletons.push_back({sign * grid(), 0.0});
        else if (style == 1)
            spec.singletons.push_back({0.0, sign * grid()});
        else
            spec.singletons.push_back({0.0, 0.0});
    }
    return spec;
}

bool specs_match(const BlockSpec& spec, const CanonicalForm& form) {
    std::vector<std::pair<double, double>> want, got;
    for (const PairSpec& p : spec.pairs) want.push_back({p.a, p.b});
    for (const PairBlock& p : form.pair_blocks) got.push_back({p.a, p.b});
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    if (want.size() != got.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i)
        if (std::abs(want[i].first - got[i].first) > 1e-9 ||
            std::abs(want[i].second - got[i].second) > 1e-9)
            return false;
    want.clear();
    got.clear();
    for (const SingletonSpec& s : spec.singletons) want.push_back({s.alpha, s.beta});
    for (const Singleton& s : form.singletons) got.push_back({s.alpha, s.beta});
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    if (want.size() != got.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i)
        if (std::abs(want[i].first - got[i].first) > 1e-9 ||
            std::abs(want[i].second - got[i].second) > 1e-9)
            return false;
    return true;
}

int cmd_selftest(std::uint64_t seed, bool force_fail, std::ostream& out) {
    bool all_ok = true;

    constexpr int kRoundTrips = 30;
    int rt_ok = 0;
    SeededRng rng(seed);
    for (int i = 0; i < kRoundTrips; ++i) {
        const BlockSpec spec = drawn_spec(rng);
        const auto [a, b] = random_anticommuting_pair(spec, seed + 1000 + i);
        const CanonicalForm form = canonicalize(a, b);
        if (specs_match(spec, form) && verify(a, b, form).pass) ++rt_ok;
    }
    out << "canonical round-trip: " << rt_ok << "/" << kRoundTrips << " ok\n";
    all_ok = all_ok && rt_ok == kRoundTrips;

    for (int dim = 2; dim <= 4; ++dim) {
        const PhaseScanReport scan = phase_theorem_scan(dim, 800, seed + dim);
        out << "phase scan dim " << dim << ": " << scan.trials << " trials, "
            << scan.counterexamples << " counterexamples\n";
        all_ok = all_ok && scan.counterexamples == 0;
    }

    std::vector<std::pair<HermitianOperator, HermitianOperator>> sites(
        3, {HermitianOperator(pauli_x()), HermitianOperator(pauli_y())});
    const GhzSet gs = build_ghz_set(sites);
    const bool commute_ok = check_mutual_commutation(gs).all_commute;
    std::vector<ComplexMatrix> ops = gs.operators;
    ops.push_back(gs.product_operator);
    const std::vector<double> values = joint_eigenvalues(ops, ghz_state(3), 1e-12);
    const bool values_ok = std::abs(values[0] - 1.0) <= 1e-12 &&
                           std::abs(values[1] - 1.0) <= 1e-12 &&
                           std::abs(values[2] - 1.0) <= 1e-12 &&
                           std::abs(values[3] + 1.0) <= 1e-12;
    const bool blocked_ok = lhv_search(gs, {1.0, 1.0, 1.0, -1.0}).satisfying.empty();
    const bool open_ok = lhv_search(gs, {1.0, 1.0, 1.0, 1.0}).satisfying.size() == 8;
    out << "two-level family: commutation " << (commute_ok ? "ok" : "FAIL")
        << ", joint values " << (values_ok ? "ok" : "FAIL") << ", blocked targets "
        << (blocked_ok ? "ok" : "FAIL") << ", open targets " << (open_ok ? "ok" : "FAIL")
        << "\n";
    all_ok = all_ok && commute_ok && values_ok && blocked_ok && open_ok;

    ComplexMatrix a3(3, 3);
    a3(0, 0) = 1.0;
    a3(1, 1) = -1.0;
    a3(2, 2) = -1.0;
    ComplexMatrix b3(3, 3);
    b3(0, 1) = 3.0;
    b3(1, 0) = 3.0;
    b3(0, 2) = 4.0;
    b3(2, 0) = 4.0;
    std::vector<std::pair<HermitianOperator, HermitianOperator>> spin1(
        3, {HermitianOperator(a3), HermitianOperator(b3)});
    const TrivialityReport tr = triviality_report(spin1);
    const bool triv_ok = tr.block_diagonal && tr.pair_tuples.size() == 1 &&
                         tr.contradiction_reproduced;
    out << "three-level reduction: " << (triv_ok ? "ok" : "FAIL") << " ("
        << tr.pair_tuples.size() << " pair tuple, " << tr.singleton_tuple_count
        << " singleton tuples)\n";
    all_ok = all_ok && triv_ok;

    if (force_fail) {
        out << "forced failure: enabled\n";
        all_ok = false;
    }
    out << (all_ok ? "selftest: all suites passed\n" : "selftest: FAILURES above\n");
    return all_ok ? kExitOk : kExitVerify;
}

}  // namespace

double round_sig12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

ComplexMatrix load_matrix(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw input_error("cannot open " + path);
    json j;
    try {
        j = json::parse(file);
    } catch (const json::parse_error& e) {
        throw input_error(path + ": " + e.what());
    }
    return matrix_from_json(j, path);
}

void save_matrix(const ComplexMatrix& m, const std::string& path) {
    if (!m.square()) throw std::invalid_argument("save_matrix: matrix must be square");
    std::ofstream file(path, std::ios::binary);
    if (!file) throw input_error("cannot write " + path);
    file << matrix_to_json(m).dump(2) << "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hermitian pair classification, canonical reduction, and GHZ analysis"};
    app.require_subcommand(1);

    std::string a_path, b_path, out_path, targets_spec;
    std::vector<std::string> pair_paths;
    double tol = kDefaultValidationTol;
    std::uint64_t seed = 42;
    bool force_fail = false;

    CLI::App* analyze = app.add_subcommand("analyze", "Classify the relation of a pair");
    analyze->add_option("--a", a_path, "Matrix file for A")->required();
    analyze->add_option("--b", b_path, "Matrix file for B")->required();
    analyze->add_option("--tol", tol, "Relative tolerance");
    analyze->add_option("--out", out_path, "Write the report to this file");

    CLI::App* canon = app.add_subcommand("canon", "Reduce an anticommuting pair to blocks");
    canon->add_option("--a", a_path, "Matrix file for A")->required();
    canon->add_option("--b", b_path, "Matrix file for B")->required();
    canon->add_option("--tol", tol, "Relative tolerance");
    canon->add_option("--out", out_path, "Write the report to this file");

    CLI::App* ghz = app.add_subcommand("ghz", "Build and check an n-party operator family");
    ghz->add_option("--pairs", pair_paths, "Matrix files, A B per site")->required();
    ghz->add_option("--tol", tol, "Relative tolerance");
    ghz->add_option("--out", out_path, "Write the report to this file");

    CLI::App* lhv = app.add_subcommand("lhv", "Count local value assignments hitting targets");
    lhv->add_option("--pairs", pair_paths, "Matrix files, A B per site")->required();
    lhv->add_option("--targets", targets_spec, "Comma-separated joint values, product last")
        ->required();
    lhv->add_option("--tol", tol, "Relative tolerance");
    lhv->add_option("--out", out_path, "Write the report to this file");

    CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in invariant suites");
    selftest->add_option("--seed", seed, "Base seed for the random suites");
    selftest->add_flag("--force-fail", force_fail, "Force a failing exit (debug)")
        ->group("");  // hidden

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "argument error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(a_path, b_path, tol, out, out_path);
        if (app.got_subcommand(canon)) return cmd_canon(a_path, b_path, tol, out, out_path);
        if (app.got_subcommand(ghz)) return cmd_ghz(pair_paths, tol, out, out_path);
        if (app.got_subcommand(lhv))
            return cmd_lhv(pair_paths, targets_spec, tol, out, out_path);
        return cmd_selftest(seed, force_fail, out);
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitPrecondition;
    }
}

}  // namespace pauliform::cli
