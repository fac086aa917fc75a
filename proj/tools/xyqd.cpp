// xyqd: discord, correlators and figure data for the transverse-field XY chain.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xyqd/recipes.hpp"

using namespace xyqd;

namespace {

struct Flags {
    std::string gamma = "0.7";
    std::string h = "0.5";
    std::string h_range;
    std::string temp = "0";
    std::string temp_range;
    std::string L;
    std::string r = "1";
    std::string hx = "0";
    bool adaptive_hx = false;
    std::string state = "auto";
    std::string boundary = "periodic";
    std::string out;
    int workers = 1;
    std::string cache_dir;
    double tol = 1e-10;
    std::string obs = "I,C,Q";
    // fidelity
    double dh = 1e-3;
    std::string sector = "auto";
    // scaling
    std::string omega = "0,0.472,1";
    bool pinning = true;
    double window = 0.02;
    int check_L = 20;
    std::string fig;
};

std::vector<double> fields_of(const Flags& f) { return parse_range(f.h_range.empty() ? f.h : f.h_range); }
std::vector<double> temps_of(const Flags& f) { return parse_range(f.temp_range.empty() ? f.temp : f.temp_range); }

Boundary boundary_of(const Flags& f)
{
    if (f.boundary == "periodic")
        return Boundary::Periodic;
    if (f.boundary == "open")
        return Boundary::Open;
    throw ValidationError("boundary must be periodic or open");
}

SweepSpec spec_of(const Flags& f, std::vector<std::string> observables)
{
    SweepSpec s;
    s.gammas = parse_range(f.gamma);
    s.fields = fields_of(f);
    s.temperatures = temps_of(f);
    if (!f.L.empty())
        s.lengths = parse_int_list(f.L);
    s.h_xs = parse_range(f.hx);
    s.radii = parse_int_list(f.r);
    s.adaptive_hx = f.adaptive_hx;
    s.boundary = boundary_of(f);
    if (f.state == "auto") {
        const bool hot = std::any_of(s.temperatures.begin(), s.temperatures.end(), [](double T) { return T > 0; });
        s.state = hot ? StateConvention::Thermal : StateConvention::Symmetric;
    } else {
        s.state = parse_state_convention(f.state);
    }
    if (s.state == StateConvention::Thermal)
        for (double T : s.temperatures)
            if (!(T > 0.0))
                throw ValidationError("thermal convention needs every T > 0");
    s.observables = std::move(observables);
    s.out = f.out;
    s.workers = f.workers;
    s.cache_dir = f.cache_dir;
    s.tol = f.tol;
    s.validate();
    return s;
}

std::vector<std::string> split(const std::string& text)
{
    std::vector<std::string> v;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');)
        if (!p.empty())
            v.push_back(p);
    return v;
}

void emit(const Flags& f, const csv::Table& t)
{
    if (f.out.empty())
        csv::write(std::cout, t);
    else
        csv::write_file(f.out, t);
}

void emit_summary(const Flags& f, const nlohmann::json& j)
{
    if (f.out.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_json(f.out + ".json", j);
}

int run_sweep_command(const Flags& f, std::vector<std::string> observables)
{
    const SweepResult r = run_sweep(spec_of(f, std::move(observables)));
    if (f.out.empty())
        csv::write(std::cout, r.table);
    if (r.failed_points)
        std::cerr << r.failed_points << " of " << r.points << " points failed (see the error column)\n";
    return 0;
}

int run_rho(const Flags& f)
{
    const SweepSpec s = spec_of(f, {"Q"});
    csv::Table t{{"gamma", "h", "T", "L", "state", "r", "tag", "row", "col", "re", "im"}, {}};
    const int rmax = max_radius(s.radii);
    for (PointSpec p : s.points()) {
        const CorrelatorSet cs = point_correlators(p, rmax);
        for (int r : s.radii) {
            const DensityMatrix rho = rho_pair(cs, r);
            for (int i = 0; i < rho.dim(); ++i)
                for (int j = 0; j < rho.dim(); ++j)
                    t.rows.push_back({csv::format(p.gamma), csv::format(p.h), csv::format(p.temperature),
                                      p.length ? std::to_string(*p.length) : "bulk", to_string(p.state),
                                      std::to_string(r), to_string(rho.tag()), std::to_string(i), std::to_string(j),
                                      csv::format(rho.matrix()(i, j).real()), csv::format(rho.matrix()(i, j).imag())});
        }
    }
    emit(f, t);
    return 0;
}

int run_fidelity(const Flags& f)
{
    if (f.L.empty())
        throw ValidationError("fidelity needs --L");
    std::optional<Parity> sector;
    if (f.sector == "even")
        sector = Parity::Even;
    else if (f.sector == "odd")
        sector = Parity::Odd;
    else if (f.sector != "auto")
        throw ValidationError("sector must be auto, even or odd");
    csv::Table t{{"gamma", "L", "h", "dh", "F", "error"}, {}};
    for (double g : parse_range(f.gamma))
        for (int L : parse_int_list(f.L))
            for (double h : fields_of(f)) {
                std::string value, error;
                try {
                    value = csv::format(fidelity(ModelParams::finite(g, h, L), f.dh, sector));
                } catch (const NumericalError& e) {
                    error = e.what();
                }
                t.rows.push_back({csv::format(g), std::to_string(L), csv::format(h), csv::format(f.dh), value, error});
            }
    emit(f, t);
    return 0;
}

int run_displacement(const Flags& f)
{
    const SweepSpec s = spec_of(f, {"Q"});
    csv::Table t{{"gamma", "h", "T", "L", "state", "displacement"}, {}};
    for (int r : s.radii)
        t.header.push_back("Q" + std::to_string(r));
    for (const PointSpec& p : s.points()) {
        const auto q = discord_profile(p, s.radii);
        csv::Row row{csv::format(p.gamma), csv::format(p.h), csv::format(p.temperature),
                     p.length ? std::to_string(*p.length) : "bulk", to_string(p.state), csv::format(displacement(q))};
        for (double v : q)
            row.push_back(csv::format(v));
        t.rows.push_back(std::move(row));
    }
    emit(f, t);
    return 0;
}

nlohmann::json collapse_json(const CollapseResult& c)
{
    nlohmann::json j{{"residual", c.residual}, {"points_used", c.points_used}, {"exponents", c.exponents}};
    for (const auto& s : c.shifts)
        j["shifts"][csv::format(s.param)] = s.shift;
    return j;
}

int run_scaling(const std::string& kind, const Flags& f)
{
    const double g = parse_range(f.gamma).at(0);
    nlohmann::json j{{"version", version}, {"operation", "scaling " + kind}, {"gamma", g}};
    csv::Table t;
    if (kind == "fss") {
        const auto hs = parse_range(f.h_range.empty() ? "0.7:1.2:51" : f.h_range);
        if (hs.size() < 3)
            throw ValidationError("fss needs at least three fields");
        const FssStudy s = fss_study(g, f.L.empty() ? std::vector<int>{8, 10, 12, 14, 16} : parse_int_list(f.L),
                                     hs.front(), hs.back(), static_cast<int>(hs.size()), boundary_of(f), f.pinning,
                                     parse_range(f.omega), f.workers);
        t.header = {"L", "h", "Q1", "dQ1_dh"};
        for (std::size_t i = 0; i < s.q1.records.size(); ++i)
            t.rows.push_back({csv::format(s.q1.records[i].param), csv::format(s.q1.records[i].h),
                              csv::format(s.q1.records[i].value), csv::format(s.derivative.records[i].value)});
        for (const auto& [om, c] : s.by_omega)
            j["omega"][csv::format(om)] = collapse_json(c);
    } else if (kind == "factorization") {
        const ExponentialScalingStudy s = exponential_scaling_study(
            g, f.L.empty() ? std::vector<int>{8, 10, 12, 14} : parse_int_list(f.L), f.window, 17, f.check_L,
            f.check_L > 0 ? std::vector<double>{-f.window, 0.0, f.window} : std::vector<double>{}, f.workers);
        t.header = {"L", "h", "Q1", "Q1_bulk"};
        for (const auto& r : s.data.records)
            t.rows.push_back({csv::format(r.param), csv::format(r.h), csv::format(r.value),
                              csv::format(s.reference.at(r.h))});
        j["alpha"] = s.fit.alpha;
        j["collapse"] = collapse_json(s.fit.collapse);
        if (f.check_L > 0)
            j["check"] = {{"L", f.check_L}, {"max_abs_difference", s.max_check_difference}};
    } else if (kind == "thermal") {
        const auto Ts = parse_range(f.temp_range.empty() ? "1e-3:1e-1:11:log" : f.temp_range);
        if (Ts.size() < 3)
            throw ValidationError("thermal scaling needs at least three temperatures");
        const ThermalScalingStudy s = thermal_scaling_study(g, Ts.front(), Ts.back(), static_cast<int>(Ts.size()),
                                                            {1e-3, 2.154434690031884e-3, 4.641588833612779e-3, 1e-2},
                                                            4.0, 17, 0.2, f.workers);
        t.header = {"T", "dQ1_dh_at_h1"};
        for (std::size_t i = 0; i < s.temperatures.size(); ++i)
            t.rows.push_back({csv::format(s.temperatures[i]), csv::format(s.critical_derivative[i])});
        j["x_log_form"] = s.slope.log_form.slope;
        j["log_fit_r2"] = s.slope.log_form.r2;
        if (s.slope.power_form_valid)
            j["x_power_form"] = s.slope.power_form.slope;
        j["collapse_log_residual"] = s.log_residual;
        j["collapse_log_residual_x_0.2"] = s.log_residual_reference;
        j["collapse_power_residual"] = s.power_residual;
    } else {
        throw ValidationError("scaling kind must be fss, factorization or thermal");
    }
    if (!f.out.empty())
        csv::write_file(f.out, t);
    emit_summary(f, j);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quantum discord and correlations in the transverse-field XY chain"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags win");
    Flags f;
    app.add_option("--gamma", f.gamma, "anisotropy (value, list or a:b:n range)");
    app.add_option("--h", f.h, "transverse field (value or list)");
    app.add_option("--h-range", f.h_range, "field range a:b:n[:log]; overrides --h");
    app.add_option("--temp", f.temp, "temperature (value or list)");
    app.add_option("--temp-range", f.temp_range, "temperature range a:b:n[:log]; overrides --temp");
    app.add_option("--L", f.L, "chain lengths; omit for the thermodynamic limit");
    app.add_option("--r", f.r, "pair distances, e.g. 1,2,3 or 1:5:5");
    app.add_option("--hx", f.hx, "longitudinal field for broken ED");
    app.add_flag("--adaptive-hx", f.adaptive_hx, "raise h_x above the parity splitting (broken ED)");
    app.add_option("--state", f.state, "symmetric, broken, thermal or auto");
    app.add_option("--boundary", f.boundary, "periodic or open (broken ED)");
    app.add_option("--out", f.out, "output file (directory for reproduce); stdout if omitted");
    app.add_option("--workers", f.workers, "worker threads");
    app.add_option("--cache-dir", f.cache_dir, "per-point result cache");
    app.add_option("--tol", f.tol, "quadrature tolerance");

    auto* correlators = app.add_subcommand("correlators", "g_z, g_x and two-point correlators");
    auto* rho = app.add_subcommand("rho", "two-site density matrices");
    auto* disc = app.add_subcommand("discord", "I, C, Q and the optimal measurement");
    auto* sweep = app.add_subcommand("sweep", "grid sweep of chosen observables");
    sweep->add_option("--obs", f.obs, "observables: I C Q theta phi asym g_z g_x g_xx g_yy g_zz g_xz g_zx");
    auto* fid = app.add_subcommand("fidelity", "ground-state fidelity F(h, h + dh) at finite L");
    fid->add_option("--dh", f.dh, "field step");
    fid->add_option("--sector", f.sector, "auto, even or odd");
    auto* disp = app.add_subcommand("displacement", "mean pairwise spread of Q_r over the distances in --r");
    auto* scaling = app.add_subcommand("scaling", "scaling studies");
    scaling->require_subcommand(1);
    auto* fss = scaling->add_subcommand("fss", "finite-size collapse of dQ_1/dh near h = 1 (ED)");
    fss->add_option("--omega", f.omega, "omega values to score");
    fss->add_option("--pinning", f.pinning, "ground state with an adaptive longitudinal field (default true)");
    auto* fac = scaling->add_subcommand("factorization", "exponential collapse of Q_1 around h_f (ED vs bulk)");
    fac->add_option("--window", f.window, "half-width of the field window around h_f");
    fac->add_option("--check-L", f.check_L, "length compared with the bulk value; 0 skips");
    auto* th = scaling->add_subcommand("thermal", "dQ_1/dh at h = 1 against T, and the (h - 1)/T collapse");
    auto* rep = app.add_subcommand("reproduce", "write the data behind one figure");
    rep->add_option("fig", f.fig, "fig1 fig2 fig3 fig4 fig5a fig5b")->required();
    for (auto* sub : {correlators, rho, disc, sweep, fid, disp, scaling, fss, fac, th, rep})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*correlators)
            return run_sweep_command(f, {"g_z", "g_x", "g_xx", "g_yy", "g_zz", "g_xz", "g_zx"});
        if (*rho)
            return run_rho(f);
        if (*disc)
            return run_sweep_command(f, {"I", "C", "Q", "theta", "phi"});
        if (*sweep)
            return run_sweep_command(f, split(f.obs));
        if (*fid)
            return run_fidelity(f);
        if (*disp)
            return run_displacement(f);
        if (*fss)
            return run_scaling("fss", f);
        if (*fac)
            return run_scaling("factorization", f);
        if (*th)
            return run_scaling("thermal", f);
        if (*rep) {
            ReproduceOptions o;
            o.out_dir = f.out.empty() ? "." : f.out;
            o.workers = f.workers;
            std::cout << reproduce(f.fig, o).dump(2) << '\n';
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
