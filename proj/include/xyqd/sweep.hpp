#pragma once

// Parameter sweeps: grid expansion, a worker pool over grid points, an
// in-order writer, a content-addressed cache and a JSON sidecar.

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "xyqd/csv.hpp"
#include "xyqd/observables.hpp"

namespace xyqd {

inline constexpr const char* version = "1.0.0";

inline std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// "a:b:n" (n evenly spaced values, ends included), "a:b:n:log" or "v1,v2,...".
inline std::vector<double> parse_range(const std::string& text)
{
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, sep);)
        parts.push_back(p);
    std::vector<double> out;
    if (sep == ',') {
        for (const auto& p : parts)
            if (!p.empty())
                out.push_back(csv::parse_double(p));
        return out;
    }
    if (parts.size() != 3 && !(parts.size() == 4 && parts[3] == "log"))
        throw ValidationError("range must be a:b:n or a:b:n:log, got '" + text + "'");
    const double a = csv::parse_double(parts[0]), b = csv::parse_double(parts[1]);
    const double nd = csv::parse_double(parts[2]);
    if (nd < 0 || nd != std::floor(nd))
        throw ValidationError("range count must be a non-negative integer");
    const int n = static_cast<int>(nd);
    const bool log = parts.size() == 4;
    if (log && !(a > 0 && b > 0))
        throw ValidationError("log range needs positive ends");
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
    }
    return out;
}

inline std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    for (double v : parse_range(text)) {
        if (v != std::floor(v))
            throw ValidationError("expected integers, got " + csv::format(v));
        out.push_back(static_cast<int>(v));
    }
    return out;
}

inline const std::vector<std::string>& known_observables()
{
    static const std::vector<std::string> k{"I", "C", "Q", "theta", "phi", "asym",
                                            "g_z", "g_x", "g_xx", "g_yy", "g_zz", "g_xz", "g_zx"};
    return k;
}

struct SweepSpec {
    std::vector<double> gammas{0.7};
    std::vector<double> fields{0.5};
    std::vector<double> temperatures{0.0};
    std::vector<int> lengths;  ///< empty = thermodynamic limit
    std::vector<double> h_xs{0.0};
    std::vector<int> radii{1};
    StateConvention state = StateConvention::Symmetric;
    Boundary boundary = Boundary::Periodic;
    bool adaptive_hx = false;
    std::vector<std::string> observables{"I", "C", "Q"};
    std::string out;        ///< CSV path; empty = no file
    int workers = 1;
    std::string cache_dir;  ///< empty = no cache
    double tol = 1e-10;     ///< quadrature tolerance

    void validate() const
    {
        if (gammas.empty() || fields.empty() || temperatures.empty() || h_xs.empty() || radii.empty())
            throw ValidationError("sweep ranges must be non-empty");
        if (observables.empty())
            throw ValidationError("no observables requested");
        for (const auto& o : observables)
            if (std::find(known_observables().begin(), known_observables().end(), o) == known_observables().end())
                throw ValidationError("unknown observable '" + o + "'");
        max_radius(radii);
        if (state == StateConvention::Broken)
            for (int L : lengths)
                if (L > max_ed_length)
                    throw ValidationError("broken convention needs L <= 20");
        if (workers < 1)
            throw ValidationError("workers must be >= 1");
        if (!(tol > 0.0))
            throw ValidationError("tol must be > 0");
    }

    std::vector<std::string> columns() const
    {
        std::vector<std::string> c{"gamma", "h", "T", "L", "hx", "state", "r"};
        c.insert(c.end(), observables.begin(), observables.end());
        c.push_back("error");
        return c;
    }

    std::vector<PointSpec> points() const
    {
        std::vector<PointSpec> pts;
        std::vector<std::optional<int>> ls;
        if (lengths.empty())
            ls.push_back(std::nullopt);
        for (int L : lengths)
            ls.push_back(L);
        for (double g : gammas)
            for (const auto& L : ls)
                for (double T : temperatures)
                    for (double hx : h_xs)
                        for (double h : fields) {
                            PointSpec p;
                            p.gamma = g;
                            p.h = h;
                            p.temperature = T;
                            p.length = L;
                            p.state = state;
                            p.boundary = boundary;
                            p.h_x = hx;
                            p.adaptive_hx = adaptive_hx;
                            p.fermion.quad.abs_tol = tol;
                            pts.push_back(p);
                        }
        return pts;
    }

    /// Deterministic text form of everything that affects the output.
    std::string canonical() const
    {
        auto list = [](const auto& v) {
            std::string s;
            for (const auto& x : v)
                s += (s.empty() ? "" : ",") + csv::format(x);
            return s;
        };
        std::string obs;
        for (const auto& o : observables)
            obs += (obs.empty() ? "" : ",") + o;
        return std::string("gamma=") + list(gammas) + "|h=" + list(fields) + "|T=" + list(temperatures) +
               "|L=" + list(lengths) + "|hx=" + list(h_xs) + "|r=" + list(radii) + "|state=" + to_string(state) +
               "|boundary=" + (boundary == Boundary::Periodic ? "periodic" : "open") +
               "|adaptive=" + (adaptive_hx ? "1" : "0") + "|obs=" + obs + "|tol=" + csv::format(tol);
    }
};

namespace detail {

inline std::string point_key(const SweepSpec& s, const PointSpec& p)
{
    std::string r;
    for (int x : s.radii)
        r += std::to_string(x) + ",";
    std::string obs;
    for (const auto& o : s.observables)
        obs += o + ",";
    const std::string text = std::string(version) + "|sweep-point|gamma=" + csv::format(p.gamma) +
                             "|h=" + csv::format(p.h) + "|T=" + csv::format(p.temperature) +
                             "|L=" + (p.length ? std::to_string(*p.length) : "bulk") + "|hx=" + csv::format(p.h_x) +
                             "|adaptive=" + (p.adaptive_hx ? "1" : "0") + "|state=" + to_string(p.state) +
                             "|boundary=" + (p.boundary == Boundary::Periodic ? "periodic" : "open") +
                             "|tol=" + csv::format(p.fermion.quad.abs_tol) + "|r=" + r + "|obs=" + obs;
    return hex(fnv1a(text));
}

inline std::vector<csv::Row> compute_point(const SweepSpec& s, const PointSpec& p)
{
    auto prefix = [&](int r) {
        return csv::Row{csv::format(p.gamma), csv::format(p.h), csv::format(p.temperature),
                        p.length ? std::to_string(*p.length) : "bulk", csv::format(p.h_x), to_string(p.state),
                        std::to_string(r)};
    };
    std::vector<csv::Row> rows;
    try {
        const CorrelatorSet cs = point_correlators(p, max_radius(s.radii));
        DiscordOptions opt;
        opt.ab_asymmetry = std::find(s.observables.begin(), s.observables.end(), "asym") != s.observables.end();
        for (const auto& rec : pair_profile(cs, s.radii, opt)) {
            csv::Row row = prefix(rec.r);
            const auto i = static_cast<std::size_t>(rec.r - 1);
            for (const auto& o : s.observables) {
                const auto& t = rec.triple;
                double v = 0.0;
                if (o == "I") v = t.mutual_info;
                else if (o == "C") v = t.classical;
                else if (o == "Q") v = t.discord;
                else if (o == "theta") v = t.argmax.theta;
                else if (o == "phi") v = t.argmax.phi;
                else if (o == "asym") v = t.ab_asymmetry.value_or(0.0);
                else if (o == "g_z") v = cs.g_z;
                else if (o == "g_x") v = cs.g_x;
                else if (o == "g_xx") v = cs.g_xx[i];
                else if (o == "g_yy") v = cs.g_yy[i];
                else if (o == "g_zz") v = cs.g_zz[i];
                else if (o == "g_xz") v = cs.g_xz[i];
                else if (o == "g_zx") v = cs.g_zx[i];
                row.push_back(csv::format(v));
            }
            row.push_back("");
            rows.push_back(std::move(row));
        }
    } catch (const std::exception& e) {
        rows.clear();
        for (int r : s.radii) {
            csv::Row row = prefix(r);
            row.insert(row.end(), s.observables.size(), "");
            row.push_back(e.what());
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline bool failed(const std::vector<csv::Row>& rows) { return !rows.empty() && !rows.front().back().empty(); }

} // namespace detail

struct SweepResult {
    csv::Table table;
    std::size_t points = 0;
    std::size_t failed_points = 0;
    std::size_t cache_hits = 0;
    nlohmann::json sidecar;
};

/// Tolerances stamped into every sidecar.
inline nlohmann::json tolerance_record(double quad_tol)
{
    const ClassicalOptions c;
    const EdConfig e;
    return {{"quadrature_tol", quad_tol},
            {"lanczos_tol_relative", e.lanczos_tol},
            {"measurement_grid", {c.grid_theta, c.grid_phi}},
            {"measurement_value_tol", c.value_tol},
            {"discord_negative_tol", discord_negative_tol},
            {"density_tolerances", {{"hermitian", DensityTolerances{}.hermitian},
                                    {"trace", DensityTolerances{}.trace},
                                    {"clip", DensityTolerances{}.clip},
                                    {"fail", DensityTolerances{}.fail}}}};
}

inline void write_json(const std::string& path, const nlohmann::json& j)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

inline SweepResult run_sweep(const SweepSpec& spec)
{
    spec.validate();
    const auto pts = spec.points();
    SweepResult res;
    res.points = pts.size();
    res.table.header = spec.columns();

    std::ofstream out;
    if (!spec.out.empty()) {
        out.open(spec.out, std::ios::binary);
        if (!out)
            throw ValidationError("cannot write '" + spec.out + "'");
        csv::write_row(out, res.table.header);
    }
    if (!spec.cache_dir.empty())
        std::filesystem::create_directories(spec.cache_dir);

    std::vector<std::optional<std::vector<csv::Row>>> slots(pts.size());
    std::vector<char> hit(pts.size(), 0);
    std::mutex mu;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < pts.size();) {
            std::vector<csv::Row> rows;
            std::string cache_file;
            bool cached = false;
            if (!spec.cache_dir.empty()) {
                cache_file = spec.cache_dir + "/" + detail::point_key(spec, pts[i]) + ".csv";
                if (std::filesystem::exists(cache_file)) {
                    try {
                        const csv::Table t = csv::read_file(cache_file);
                        if (t.header == res.table.header && t.rows.size() == spec.radii.size()) {
                            rows = t.rows;
                            cached = true;
                        }
                    } catch (const Error&) {
                        // unreadable entry: recompute and overwrite
                    }
                }
            }
            if (!cached) {
                rows = detail::compute_point(spec, pts[i]);
                if (!cache_file.empty() && !detail::failed(rows)) {
                    const std::string tmp = cache_file + ".tmp" + std::to_string(i);
                    csv::write_file(tmp, {res.table.header, rows});
                    std::filesystem::rename(tmp, cache_file);
                }
            }
            {
                std::lock_guard<std::mutex> lock(mu);
                slots[i] = std::move(rows);
                hit[i] = cached;
            }
            ready.notify_all();
        }
    };

    const int n_workers = std::min<int>(spec.workers, static_cast<int>(std::max<std::size_t>(1, pts.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w)
        pool.emplace_back(work);

    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<csv::Row> rows;
        {
            std::unique_lock<std::mutex> lock(mu);
            ready.wait(lock, [&] { return slots[i].has_value(); });
            rows = std::move(*slots[i]);
            slots[i].reset();
        }
        res.failed_points += detail::failed(rows);
        res.cache_hits += hit[i];
        for (auto& r : rows) {
            if (out)
                csv::write_row(out, r);
            res.table.rows.push_back(std::move(r));
        }
    }
    for (auto& t : pool)
        t.join();

    res.sidecar = {{"version", version},
                   {"operation", "sweep"},
                   {"spec", spec.canonical()},
                   {"spec_hash", hex(fnv1a(spec.canonical()))},
                   {"columns", res.table.header},
                   {"points", res.points},
                   {"rows", res.table.rows.size()},
                   {"failed_points", res.failed_points},
                   {"tolerances", tolerance_record(spec.tol)}};
    if (!spec.out.empty()) {
        out.close();
        write_json(spec.out + ".json", res.sidecar);
    }
    return res;
}

} // namespace xyqd
