// Batch front end. One subcommand per run; the report is JSON with schema "qkz-report/1".
// Exit codes: 0 pass, 1 tolerance exceeded, 2 usage or config error, 3 evaluation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qkz/qkz.hpp"

using json = nlohmann::json;
using namespace qkz;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

cplx to_c(const json& j)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError("complex scalars are numbers or [re, im] pairs");
}

json from_c(cplx c) { return json::array({c.real(), c.imag()}); }

json from_m(const Matrix& M)
{
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < M.cols(); ++j) r.push_back(from_c(M(i, j)));
        rows.push_back(r);
    }
    return rows;
}

json from_v(const Vector& v)
{
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(from_c(v(i)));
    return a;
}

CVec cvec(const json& j, const char* what)
{
    if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
    CVec out;
    for (auto& x : j) out.push_back(to_c(x));
    return out;
}

MultiIndex index_of(const json& j)
{
    if (!j.is_array()) throw ConfigError("indices are integer arrays");
    MultiIndex m;
    for (auto& x : j) m.push_back(x.get<int>());
    return m;
}

std::vector<int> perm_of(const json& j, int n)
{
    // one-based in the config
    std::vector<int> s;
    for (auto& x : j) s.push_back(x.get<int>() - 1);
    std::vector<int> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    if (static_cast<int>(s.size()) != n) throw ConfigError("sigma must have n entries");
    for (int i = 0; i < n; ++i)
        if (sorted[i] != i) throw ConfigError("sigma must be a permutation of 1..n");
    return s;
}

Params params_of(const json& c)
{
    if (!c.contains("params")) throw ConfigError("missing params");
    const json& j = c.at("params");
    Params P;
    P.n = j.value("n", 1);
    P.l = j.value("l", 0);
    if (j.contains("p")) P.p = to_c(j["p"]);
    if (j.contains("mu")) P.mu = to_c(j["mu"]);
    P.z = cvec(j.at("z"), "z");
    P.lambda = cvec(j.at("lambda"), "lambda");
    P.validate();
    return P;
}

std::vector<ModuleSpec> specs_of(const json& c, const Params& P)
{
    auto s = verma_specs(P.lambda);
    if (!c.contains("modules")) return s;
    const json& m = c["modules"];
    if (!m.is_array() || static_cast<int>(m.size()) != P.n) throw ConfigError("modules must list one kind per factor");
    for (int i = 0; i < P.n; ++i) {
        auto k = m[i].get<std::string>();
        if (k == "irreducible")
            s[i].kind = ModuleKind::irreducible;
        else if (k != "verma")
            throw ConfigError("module kind must be verma or irreducible");
    }
    return s;
}

struct Run {
    json config;
    double tol = 0.0;
    std::uint64_t seed = 7;
    QuadOptions quad;
    json out;
    bool pass = true;

    void check(const std::string& name, double value, double limit)
    {
        out["checks"].push_back({{"name", name}, {"value", value}, {"tolerance", limit}, {"pass", value < limit}});
        pass = pass && value < limit;
    }
    double tol_or(double d) const { return tol > 0.0 ? tol : config.value("tol", d); }
};

Cycle cycle_of(const json& c, const Params& P)
{
    json cy = c.value("cycle", json::object());
    auto kind = cy.value("kind", std::string("auto"));
    if (kind == "auto") return trivial_cycle(auto_contour(P), P.n);
    if (kind == "straight") {
        if (!in_straight_region(P)) throw Error(Error::Kind::domain, "straight contour outside its region");
        return trivial_cycle(Contour::line(0.0), P.n);
    }
    if (kind == "curve") {
        std::vector<double> u = cy.at("u").get<std::vector<double>>();
        return trivial_cycle(build_curve(u, cy.value("A", 2.0)), P.n);
    }
    if (kind == "la_cont") return la_cont_cycle(P, P.lambda, cy.value("eps", 0.25), cy.value("A", 2.0));
    throw ConfigError("cycle kind must be auto, straight, curve or la_cont");
}

void cmd_check_conditions(Run& r)
{
    Params P = params_of(r.config);
    auto rep = check_conditions(P);
    std::vector<std::string> sel;
    if (r.config.contains("conditions"))
        sel = r.config["conditions"].get<std::vector<std::string>>();
    else
        for (auto& c : rep.conditions) sel.push_back(c.name);
    r.out["conditions"] = json::array();
    for (auto& name : sel) {
        const auto& c = rep.get(name);
        double margin = std::isfinite(c.margin) ? c.margin : -1.0;
        r.out["conditions"].push_back({{"name", c.name}, {"pass", c.pass}, {"margin", margin}, {"detail", c.detail}});
        r.pass = r.pass && c.pass;
    }
    json dom = json::array();
    for (int i : rep.dominant) dom.push_back(i + 1);
    r.out["dominant"] = dom;
}

void cmd_rmatrix(Run& r)
{
    Params P = params_of(r.config);
    auto specs = specs_of(r.config, P);
    auto pair = r.config.value("pair", std::vector<int>{1, 2});
    if (pair.size() != 2 || pair[0] < 1 || pair[1] < 1 || pair[0] > P.n || pair[1] > P.n || pair[0] == pair[1])
        throw ConfigError("pair must name two distinct factors");
    const ModuleSpec &a = specs[pair[0] - 1], &b = specs[pair[1] - 1];
    cplx x = r.config.contains("x") ? to_c(r.config["x"]) : cplx(1.0, 0.0);
    r.out["rational"] = from_m(rational_r(a, b, P.l, x));
    r.out["trigonometric"] = from_m(trig_r(a, b, P.l, std::exp(2.0 * pi * I * x / P.p), P.kappa()));
    if (P.n >= 2) r.check("flatness", check_compatibility(P, specs), r.tol_or(1e-10));
}

void cmd_qkz_verify(Run& r)
{
    Params P = params_of(r.config);
    std::vector<int> ms;
    if (r.config.contains("m"))
        ms.push_back(r.config["m"].get<int>() - 1);
    else
        for (int m = 0; m < P.n; ++m) ms.push_back(m);
    std::vector<MultiIndex> Ws;
    if (r.config.contains("index"))
        Ws.push_back(index_of(r.config["index"]));
    else
        Ws = enumerate_indices(P.n, P.l);
    r.out["residuals"] = json::array();
    double worst = 0.0;
    for (int m : ms) {
        if (m < 0 || m >= P.n) throw ConfigError("m out of range");
        for (auto& idx : Ws) {
            auto c = verify_qkz(P, m, {Family::trigonometric, idx, {}}, r.quad);
            r.out["residuals"].push_back({{"m", m + 1}, {"index", idx}, {"residual", c.residual}, {"abs_error", c.abs_error}});
            worst = std::max(worst, c.residual);
        }
    }
    r.check("qkz_residual", worst, r.tol_or(1e-5));
}

void cmd_jmatrix(Run& r)
{
    Params P = params_of(r.config);
    const bool resonant = !dominant_set(P.lambda).empty();
    json cy = r.config.value("cycle", json::object());
    JMatrix J = resonant ? J_matrix_resonant(P, cy.value("eps", 0.25), cy.value("A", 2.0), r.quad, r.config.value("delta", 1e-3))
                         : J_matrix(P, cycle_of(r.config, P), r.quad);
    r.out["indices"] = J.rows;
    r.out["J"] = from_m(J.J);
    r.out["abs_error"] = J.abs_error;
    r.out["warnings"] = J.warnings;
    if (resonant) {
        const double scale = J.J.cwiseAbs().maxCoeff();
        double off = 0.0;
        for (std::size_t i = 0; i < J.rows.size(); ++i)
            for (std::size_t j = 0; j < J.cols.size(); ++j) {
                auto Bl = non_admissible_set(J.rows[i], P.lambda), Bm = non_admissible_set(J.cols[j], P.lambda);
                if (std::includes(Bm.begin(), Bm.end(), Bl.begin(), Bl.end()) && Bl != Bm)
                    off = std::max(off, std::abs(J.J(i, j)) / scale);
            }
        r.check("off_admissible", off, r.tol_or(1e-5));
    }
}

void cmd_det_verify(Run& r)
{
    Params P = params_of(r.config);
    const bool resonant = !dominant_set(P.lambda).empty();
    if (!resonant) {
        JMatrix J = J_matrix(P, cycle_of(r.config, P), r.quad);
        cplx d = J.J.determinant(), cf = det_closed_form(P);
        r.out["det"] = from_c(d);
        r.out["closed_form"] = from_c(cf);
        r.check("det_rel_err", std::abs(d - cf) / std::abs(cf), r.tol_or(1e-6));
        return;
    }
    json cy = r.config.value("cycle", json::object());
    JMatrix J = J_matrix_resonant(P, cy.value("eps", 0.25), cy.value("A", 2.0), r.quad).admissible(P.lambda);
    auto d = det_adm_product(P.z, P.lambda, P.l, P.p, P.mu);
    cplx det = J.J.determinant();
    r.out["det_adm"] = from_c(det);
    r.out["det_prod"] = from_c(d.det_prod);
    r.out["det1"] = from_c(d.det1);
    r.check("det_rel_err", std::abs(det - d.det_prod) / std::abs(d.det_prod), r.tol_or(1e-6));
    r.check("det1_vs_det_prod", d.agreement, r.tol_or(1e-6));
}

void cmd_asympt(Run& r)
{
    Params P = params_of(r.config);
    std::vector<int> sigma = r.config.contains("sigma") ? perm_of(r.config["sigma"], P.n) : std::vector<int>{};
    MultiIndex idx = index_of(r.config.at("index"));
    double sep = r.config.value("separation", 40.0 * std::abs(P.p));
    r.out["runs"] = json::array();
    double prev = std::numeric_limits<double>::infinity(), first = 0.0;
    bool monotone = true;
    for (double s : {sep, 2.0 * sep}) {
        P.z = zone_points(sigma, P.n, s);
        auto a = asymptotic_check(sigma, idx, P, r.quad);
        double d = std::abs(a.ratio - 1.0);
        r.out["runs"].push_back({{"separation", s}, {"ratio", from_c(a.ratio)}, {"others", a.others}});
        if (s == sep) first = d;
        monotone = monotone && d < prev;
        prev = d;
    }
    r.check("ratio_deviation", first, r.tol_or(0.05));
    r.check("decay_violation", monotone ? 0.0 : 1.0, 0.5);
}

void cmd_sing_decompose(Run& r)
{
    Params P = params_of(r.config);
    MultiIndex k = index_of(r.config.at("index"));
    auto d = decompose_sing(k, P.z, P.lambda, P.p, r.seed, &P.lambda);
    r.out["basis"] = d.basis;
    r.out["coefficients"] = from_v(d.coefficients);
    r.out["condition"] = d.condition;
    r.out["admissible"] = d.admissible;
    r.check("residual", d.residual, r.tol_or(1e-9));
}

void write_report(const json& report, const std::string& path)
{
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw ConfigError("cannot write " + tmp);
        f << text;
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"qKZ hypergeometric solutions: verification runs"};
    app.require_subcommand(1);
    std::string config_path, out_path;
    double tol = 0.0;
    std::uint64_t seed = 7;
    int threads = 1;

    const std::vector<std::pair<std::string, void (*)(Run&)>> commands = {
        {"check_conditions", cmd_check_conditions}, {"rmatrix", cmd_rmatrix},   {"qkz_verify", cmd_qkz_verify},
        {"jmatrix", cmd_jmatrix},                   {"det_verify", cmd_det_verify}, {"asympt", cmd_asympt},
        {"sing_decompose", cmd_sing_decompose},
    };
    for (auto& [name, fn] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config")->required();
        sub->add_option("--out", out_path, "report path (stdout when omitted)");
        sub->add_option("--tol", tol, "tolerance override");
        sub->add_option("--seed", seed, "sampling seed");
        sub->add_option("--threads", threads, "quadrature threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Run r;
    json report = {{"schema", "qkz-report/1"}, {"command", name}};
    int code = 0;
    try {
        std::ifstream f(config_path);
        if (!f) throw ConfigError("cannot read " + config_path);
        try {
            r.config = json::parse(f);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("malformed config: ") + e.what());
        }
        r.tol = tol;
        r.seed = seed;
        r.quad.threads = threads;
        r.quad.tol = r.config.value("quad_tol", 1e-9);
        report["config"] = r.config;
        report["resolved"] = {{"tol", tol}, {"seed", seed}, {"threads", threads}, {"quad_tol", r.quad.tol}};
        r.out["checks"] = json::array();
        for (auto& [cname, fn] : commands)
            if (cname == name) fn(r);
        report["outputs"] = r.out;
        report["status"] = r.pass ? "pass" : "fail";
        code = r.pass ? 0 : 1;
    } catch (const ConfigError& e) {
        report["status"] = "error";
        report["error"] = {{"kind", "config"}, {"message", e.what()}};
        code = 2;
    } catch (const json::exception& e) {
        report["status"] = "error";
        report["error"] = {{"kind", "config"}, {"message", e.what()}};
        code = 2;
    } catch (const Error& e) {
        report["status"] = "error";
        report["error"] = {{"kind", kind_name(e.kind())}, {"message", e.what()}};
        code = e.kind() == Error::Kind::domain ? 2 : 3;
    }
    try {
        write_report(report, out_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return code;
}
