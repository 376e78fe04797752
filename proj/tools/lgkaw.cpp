// Command line front end. Every subcommand loads a parameter file, runs one
// experiment and emits its artifacts: CSV for flat tables, JSON for nested
// reports, plus a one line summary on stdout. With --out DIR artifacts become
// files in DIR; without it they stream to stdout above the summary.
//
// Exit codes: 0 ok (cap-exceeded runs stay 0 and are flagged in-band),
// 2 malformed input, 3 domain error.

#include "lgk/config_io.hpp"
#include "lgk/geometry.hpp"
#include "lgk/landscape.hpp"
#include "lgk/model.hpp"
#include "lgk/moves.hpp"
#include "lgk/oracle.hpp"
#include "lgk/refpath.hpp"
#include "lgk/simulator.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using nlohmann::json;

namespace {

using namespace lgk;

// ==== shared option state ====

struct Globals {
    std::string params_path;
    std::string out_dir;   // empty: artifacts stream to stdout
    uint64_t seed = 1;
    int threads = 1;
};

ModelParams load_params(const Globals& g) {
    if (g.params_path.empty()) throw lgk::ParseError("missing required --params FILE");
    return parse_params_file(g.params_path);
}

// ==== small formatting helpers ====

// integral doubles print as integers; others keep 12 significant digits
std::string num_str(double v) {
    std::ostringstream os;
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9e15)
        os << (long long)v;
    else
        os << std::setprecision(12) << v;
    return os.str();
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lgk::ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// one artifact: a file under --out when given, else stdout
void emit(const Globals& g, const std::string& name, const std::string& text) {
    if (g.out_dir.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::filesystem::create_directories(g.out_dir);
    std::filesystem::path path = std::filesystem::path(g.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lgk::DomainError("cannot write file: " + path.string());
    out << text;
}

json wilson_json(const Wilson& w) {
    return json{{"lo", w.lo}, {"hi", w.hi}};
}

// ==== argument parsing helpers ====

RectSpec parse_rect_arg(const std::string& text) {
    auto sep = text.find_first_of("x,");
    if (sep != std::string::npos) {
        try {
            size_t used1 = 0, used2 = 0;
            std::string a = text.substr(0, sep), b = text.substr(sep + 1);
            RectSpec r;
            r.l1 = std::stoi(a, &used1);
            r.l2 = std::stoi(b, &used2);
            if (used1 == a.size() && used2 == b.size()) return r;
        } catch (const std::exception&) {
        }
    }
    throw lgk::ParseError("rectangle must be written L1xL2, got: " + text);
}

Kernel parse_kernel_arg(const std::string& text) {
    if (text == "plain") return Kernel::plain;
    if (text == "rf" || text == "rejection-free") return Kernel::rejection_free;
    throw lgk::ParseError("kernel must be plain or rf, got: " + text);
}

Config centered_rect(int l0, const RectSpec& r) {
    int ax = 1 + (l0 - r.l1) / 2, ay = 1 + (l0 - r.l2) / 2;
    return make_rect_config(l0, r, ax, ay);
}

// --start: zero | full | rect:L1xL2 | grid:FILE
Config make_start(const std::string& text, int l0) {
    if (text == "zero") return Config::empty(l0);
    if (text == "full" || text == "one") return standard_states(l0).all_full;
    if (text.rfind("rect:", 0) == 0) return centered_rect(l0, parse_rect_arg(text.substr(5)));
    if (text.rfind("grid:", 0) == 0) {
        Config cfg = grid_parse(read_file(text.substr(5)));
        if (cfg.l0 != l0)
            throw lgk::DomainError("grid box does not match the parameter file l0");
        return cfg;
    }
    throw lgk::ParseError("start must be zero|full|rect:L1xL2|grid:FILE, got: " + text);
}

// --targets: comma list of zero | one | gate | rect:L1xL2
TargetSpec parse_targets_arg(const std::string& text) {
    TargetSpec tg;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        if (tok == "zero") tg.zero = true;
        else if (tok == "one") tg.one = true;
        else if (tok == "gate") tg.gate = true;
        else if (tok.rfind("rect:", 0) == 0) tg.rect = parse_rect_arg(tok.substr(5));
        else throw lgk::ParseError("target must be zero|one|gate|rect:L1xL2, got: " + tok);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (!tg.any()) throw lgk::ParseError("empty target list");
    return tg;
}

const char* barrier_region_str(BarrierRegion r) {
    switch (r) {
    case BarrierRegion::Ap: return "A'";
    case BarrierRegion::Bp: return "B'";
    case BarrierRegion::Cp: return "C'";
    case BarrierRegion::Dp: return "D'";
    }
    return "?";
}

// ==== subcommands ====

void run_constants(const Globals& g) {
    ModelParams p = load_params(g);
    DerivedConstants dc = derive_constants(p);
    json j{{"regime", regime_str(dc.regime)},
           {"eps", rat_str(dc.eps)},
           {"eps_f", rat_double(dc.eps)},
           {"l2star", dc.l2star},
           {"deltafrac", rat_str(dc.deltafrac)},
           {"l1star", dc.l1star},
           {"lbar", dc.lbar},
           {"sstar", dc.sstar},
           {"gamma", rat_str(dc.gamma)},
           {"gamma_f", rat_double(dc.gamma)},
           {"vstar", rat_str(dc.vstar)},
           {"vstar_f", rat_double(dc.vstar)},
           {"gate_particles", gate_particle_count(dc)}};
    if (!g.out_dir.empty()) emit(g, "constants.json", j.dump(2) + "\n");
    std::cout << "constants: regime=" << regime_str(dc.regime) << " eps=" << rat_str(dc.eps)
              << " l2star=" << dc.l2star << " deltafrac=" << rat_str(dc.deltafrac)
              << " l1star=" << dc.l1star << " lbar=" << dc.lbar << " sstar=" << dc.sstar
              << " gamma=" << rat_str(dc.gamma) << " vstar=" << rat_str(dc.vstar) << "\n";
}

void run_energy(const Globals& g, const std::string& grid_path, const std::string& rect_text) {
    ModelParams p = load_params(g);
    if (!rect_text.empty()) {
        RectSpec r = parse_rect_arg(rect_text);
        Rat h = rect_energy(r.l1, r.l2, p);
        std::cout << "energy: rect=" << r.l1 << "x" << r.l2 << " H=" << rat_str(h) << " ("
                  << num_str(rat_double(h)) << ")\n";
        return;
    }
    if (grid_path.empty()) throw lgk::ParseError("energy needs --grid FILE or --rect L1xL2");
    Config cfg = grid_parse(read_file(grid_path));
    if (cfg.l0 != p.l0) throw lgk::DomainError("grid box does not match the parameter file l0");
    Rat h = hamiltonian(cfg, p);
    Rat h7 = lemma7_energy(cfg, p);
    GeomSummary s = summarize(cfg);
    std::cout << "energy: H=" << rat_str(h) << " (" << num_str(rat_double(h))
              << ") lemma7=" << (h == h7 ? "agree" : "DISAGREE") << " particles=" << cfg.count()
              << " n=" << s.n << " s=" << s.s << " v=" << s.v << "\n";
}

void run_classify(const Globals& g, const std::string& grid_path, const std::string& rect_text) {
    ModelParams p = load_params(g);
    DerivedConstants dc = derive_constants(p);
    Config cfg;
    if (!rect_text.empty()) cfg = centered_rect(p.l0, parse_rect_arg(rect_text));
    else if (!grid_path.empty()) cfg = grid_parse(read_file(grid_path));
    else throw lgk::ParseError("classify needs --grid FILE or --rect L1xL2");
    if (cfg.l0 != p.l0) throw lgk::DomainError("grid box does not match the parameter file l0");

    GeomSummary s = summarize(cfg);
    Rat h = hamiltonian(cfg, p);
    auto vb = in_B(cfg, dc);
    auto v1 = in_P1(cfg, p, dc);
    auto v2 = in_P2(cfg, p, dc);
    json j;
    j["descriptors"] = json{{"n", s.n},       {"cl_size", s.cl_size}, {"p1", s.p1},
                            {"p2", s.p2},     {"s", s.s},             {"g1p", s.g1p},
                            {"g2p", s.g2p},   {"v", s.v},             {"clusters", s.clusters},
                            {"monotone", s.monotone},
                            {"rect_w", s.cl_size > 0 ? s.rect_w() : 0},
                            {"rect_h", s.cl_size > 0 ? s.rect_h() : 0}};
    j["H"] = rat_str(h);
    j["H_f"] = rat_double(h);
    j["B"] = json{{"member", vb.member}, {"rule", vb.member ? vb.rule : "none"}};
    j["P1"] = json{{"member", v1.member}, {"rule", v1.member ? v1.rule : "none"}};
    j["P2"] = json{{"member", v2.member}, {"rule", v2.member ? v2.rule : "none"}};
    bool exact_rect = s.cl_size > 0 && s.n == 0 && s.clusters == 1 && s.v == 0 && s.monotone;
    if (exact_rect) {
        auto bc = compare_barriers(s.rect_w(), s.rect_h(), dc, p);
        std::vector<std::string> mins;
        for (auto k : bc.minimal) mins.emplace_back(barrier_kind_str(k));
        j["region"] = barrier_region_str(bc.region);
        j["cheapest"] = mins;
        j["t_region"] = t_region_str(region_T(s.rect_w(), s.rect_h(), dc, p.l0));
    } else {
        j["region"] = nullptr;
        j["t_region"] = nullptr;
    }
    emit(g, "classify.json", j.dump(2) + "\n");
    std::cout << "classify: B=" << (vb.member ? "true" : "false")
              << " rule=" << (vb.member ? vb.rule : "none")
              << " P1=" << (v1.member ? "true" : "false")
              << " P2=" << (v2.member ? "true" : "false") << " H=" << rat_str(h) << "\n";
}

void run_barriers(const Globals& g, const std::string& rect_text, int max_l1, int max_l2) {
    ModelParams p = load_params(g);
    DerivedConstants dc = derive_constants(p);
    const BarrierKind kinds[] = {BarrierKind::add_row,       BarrierKind::add_column,
                                 BarrierKind::remove_row,    BarrierKind::remove_column,
                                 BarrierKind::row_to_column, BarrierKind::column_to_row};
    std::vector<RectSpec> rects;
    if (!rect_text.empty()) {
        rects.push_back(parse_rect_arg(rect_text));
    } else {
        if (max_l1 <= 0) max_l1 = p.l0;
        if (max_l2 <= 0) max_l2 = p.l0;
        for (int l2 = 1; l2 <= max_l2; ++l2)
            for (int l1 = 1; l1 <= max_l1; ++l1) rects.push_back(RectSpec{l1, l2});
    }
    std::ostringstream csv;
    csv << "l1,l2,kind,value,value_f,region,cheapest\n";
    long long rows = 0;
    for (const RectSpec& r : rects) {
        auto bc = compare_barriers(r.l1, r.l2, dc, p);
        std::string mins;
        for (auto k : bc.minimal) {
            if (!mins.empty()) mins += '|';
            mins += barrier_kind_str(k);
        }
        for (BarrierKind k : kinds) {
            Rat v = barrier(k, r.l1, r.l2, p);
            csv << r.l1 << ',' << r.l2 << ',' << barrier_kind_str(k) << ',' << rat_str(v) << ','
                << num_str(rat_double(v)) << ',' << barrier_region_str(bc.region) << ','
                << csv_quote(mins) << "\n";
            ++rows;
        }
    }
    emit(g, "barriers.csv", csv.str());
    std::cout << "barriers: rects=" << rects.size() << " rows=" << rows << "\n";
}

void run_refpath(const Globals& g) {
    ModelParams p = load_params(g);
    DerivedConstants dc = derive_constants(p);
    ReferencePath path = build_reference_path(dc, p, p.l0);
    int gate_n = gate_particle_count(dc);

    std::ostringstream csv;
    csv << "step,stage,s,particles,energy_num,energy_den,inP1,inP2\n";
    Config cfg = path.initial;
    int stage0 = path.steps.empty() ? 0 : path.steps.front().stage_s;
    csv << "0," << stage0 << ",0,0,0,1,0,0\n";
    int in_p1_rows = 0, in_p2_rows = 0;
    for (size_t i = 0; i < path.steps.size(); ++i) {
        const PathStep& st = path.steps[i];
        apply(cfg, st.move);
        GeomSummary s = summarize(cfg);
        int np = cfg.count();
        bool p1 = false, p2 = false;
        if (np == gate_n) { // both gate families pin the particle count
            p1 = in_P1(cfg, p, dc).member;
            p2 = in_P2(cfg, p, dc).member;
        }
        in_p1_rows += p1;
        in_p2_rows += p2;
        Rat h = path.units.to_rat(st.h_units);
        csv << (i + 1) << ',' << st.stage_s << ',' << s.s << ',' << np << ','
            << h.numerator() << ',' << h.denominator() << ',' << (p1 ? 1 : 0) << ','
            << (p2 ? 1 : 0) << "\n";
    }
    emit(g, "refpath.csv", csv.str());
    std::cout << "refpath: steps=" << path.steps.size() << " max=" << rat_str(path.max_energy())
              << " gamma=" << rat_str(dc.gamma) << " argmax_rows=" << path.argmax.size()
              << " inP1_rows=" << in_p1_rows << " inP2_rows=" << in_p2_rows << "\n";
}

void run_simulate(const Globals& g, double beta, int runs, double cap,
                  const std::string& kernel_text, const std::string& start_text,
                  const std::string& targets_text, bool gate_audit) {
    ModelParams p = load_params(g);
    if (beta > 0) p.beta = beta;
    DerivedConstants dc = derive_constants(p);
    SimConfig sc;
    sc.params = p;
    sc.dc = dc;
    sc.master_seed = g.seed;
    sc.runs = runs;
    sc.cap = cap;
    sc.kernel = parse_kernel_arg(kernel_text);
    sc.gate_full_check = gate_audit;
    sc.threads = std::max(1, g.threads);
    Config start = make_start(start_text, p.l0);
    TargetSpec tg = parse_targets_arg(targets_text);

    std::vector<TrajectorySample> out((size_t)runs);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= runs) break;
            out[(size_t)i] = run_until_hit(start, start_text, tg, sc, (uint64_t)i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < sc.threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream csv;
    csv << "seed,start,outcome,steps,gate_hit,max_energy,max_energy_f\n";
    int n_zero = 0, n_one = 0, n_gate = 0, n_rect = 0, n_cap = 0, gate_before_one = 0;
    double sum_steps_one = 0;
    for (const TrajectorySample& ts : out) {
        switch (ts.outcome) {
        case Outcome::zero: ++n_zero; break;
        case Outcome::one:
            ++n_one;
            gate_before_one += ts.gate_hit ? 1 : 0;
            sum_steps_one += ts.steps;
            break;
        case Outcome::gate: ++n_gate; break;
        case Outcome::rect: ++n_rect; break;
        case Outcome::cap: ++n_cap; break;
        }
        csv << ts.seed << ',' << csv_quote(ts.start_label) << ',' << outcome_str(ts.outcome)
            << ',' << num_str(ts.steps) << ',' << (ts.gate_hit ? 1 : 0) << ','
            << rat_str(ts.max_energy) << ',' << num_str(rat_double(ts.max_energy)) << "\n";
    }
    emit(g, "simulate.csv", csv.str());

    json j{{"beta", p.beta},
           {"runs", runs},
           {"kernel", kernel_text},
           {"cap", cap},
           {"seed", g.seed},
           {"counts",
            json{{"zero", n_zero}, {"one", n_one}, {"gate", n_gate}, {"rect", n_rect},
                 {"capped", n_cap}}},
           {"cap_exceeded", n_cap > 0}};
    if (n_one > 0) {
        Wilson w = wilson_interval(gate_before_one, n_one);
        j["gate_before_one"] = json{{"hits", gate_before_one},
                                    {"of", n_one},
                                    {"frac", (double)gate_before_one / n_one},
                                    {"wilson", wilson_json(w)}};
        j["mean_steps_one"] = sum_steps_one / n_one;
    }
    if (!g.out_dir.empty()) emit(g, "simulate.json", j.dump(2) + "\n");
    std::cout << "simulate: runs=" << runs << " zero=" << n_zero << " one=" << n_one
              << " gate=" << n_gate << " rect=" << n_rect << " capped=" << n_cap
              << " cap_exceeded=" << (n_cap > 0 ? 1 : 0);
    if (n_one > 0)
        std::cout << " gate_frac=" << num_str((double)gate_before_one / n_one)
                  << " mean_steps_one=" << num_str(sum_steps_one / n_one);
    std::cout << "\n";
}

void run_fate(const Globals& g, const std::vector<std::string>& rect_texts, double beta,
              int runs, double cap, const std::string& kernel_text) {
    if (rect_texts.empty()) throw lgk::ParseError("fate needs at least one --rect L1xL2");
    ModelParams p = load_params(g);
    if (beta > 0) p.beta = beta;
    DerivedConstants dc = derive_constants(p);
    SimConfig sc;
    sc.params = p;
    sc.dc = dc;
    sc.master_seed = g.seed;
    sc.runs = runs;
    sc.cap = cap;
    sc.kernel = parse_kernel_arg(kernel_text);
    sc.threads = std::max(1, g.threads);

    std::ostringstream csv;
    csv << "rect,runs,hit_one_first,hit_zero_first,capped,frac_one,wilson_lo,wilson_hi\n";
    json arr = json::array();
    std::ostringstream line;
    line << "fate: beta=" << num_str(p.beta) << " kernel=" << kernel_text;
    bool any_cap = false;
    for (const std::string& rt : rect_texts) {
        RectSpec r = parse_rect_arg(rt);
        FateReport fr = fate(r, sc);
        any_cap = any_cap || fr.capped > 0;
        csv << r.l1 << 'x' << r.l2 << ',' << fr.runs << ',' << fr.hit_one_first << ','
            << fr.hit_zero_first << ',' << fr.capped << ',' << num_str(fr.frac_one) << ','
            << num_str(fr.wilson_one.lo) << ',' << num_str(fr.wilson_one.hi) << "\n";
        arr.push_back(json{{"rect", std::to_string(r.l1) + "x" + std::to_string(r.l2)},
                           {"runs", fr.runs},
                           {"hit_one_first", fr.hit_one_first},
                           {"hit_zero_first", fr.hit_zero_first},
                           {"capped", fr.capped},
                           {"frac_one", fr.frac_one},
                           {"wilson_one", wilson_json(fr.wilson_one)}});
        line << " | R(" << r.l1 << 'x' << r.l2 << ") one=" << num_str(fr.frac_one)
             << " zero=" << num_str(fr.runs > 0 ? (double)fr.hit_zero_first / fr.runs : 0.0)
             << " capped=" << fr.capped;
    }
    emit(g, "fate.csv", csv.str());
    json j{{"beta", p.beta}, {"runs", runs},          {"kernel", kernel_text},
           {"cap", cap},     {"cap_exceeded", any_cap}, {"rects", arr}};
    if (!g.out_dir.empty()) emit(g, "fate.json", j.dump(2) + "\n");
    line << " cap_exceeded=" << (any_cap ? 1 : 0);
    std::cout << line.str() << "\n";
}

void run_recurrence(const Globals& g, double beta, int n_states, int max_particles,
                    const std::string& kernel_text) {
    ModelParams p = load_params(g);
    if (beta > 0) p.beta = beta;
    DerivedConstants dc = derive_constants(p);
    SimConfig sc;
    sc.params = p;
    sc.dc = dc;
    sc.master_seed = g.seed;
    sc.runs = n_states;
    sc.kernel = parse_kernel_arg(kernel_text);
    sc.threads = std::max(1, g.threads);
    RecurrenceReport rr = recurrence(sc, n_states, max_particles);
    json j{{"beta", p.beta},
           {"runs", rr.runs},
           {"returned", rr.returned},
           {"fraction", rr.fraction},
           {"wilson", wilson_json(rr.wilson)},
           {"cap", rr.cap},
           {"max_particles", max_particles},
           {"kernel", kernel_text},
           {"cap_exceeded", rr.returned < rr.runs}};
    emit(g, "recurrence.json", j.dump(2) + "\n");
    std::cout << "recurrence: runs=" << rr.runs << " returned=" << rr.returned
              << " fraction=" << num_str(rr.fraction) << " cap=" << num_str(rr.cap)
              << " cap_exceeded=" << (rr.returned < rr.runs ? 1 : 0) << "\n";
}

void run_oracle_scan(const Globals& g, const std::vector<int>& window, int max_particles,
                     bool gate) {
    ModelParams p = load_params(g);
    DerivedConstants dc = derive_constants(p);
    if (window.size() != 4)
        throw lgk::ParseError("--window needs exactly four values: x0 y0 x1 y1");
    SubSpace w;
    w.l0 = p.l0;
    w.wx0 = window[0];
    w.wy0 = window[1];
    w.wx1 = window[2];
    w.wy1 = window[3];
    w.max_particles = max_particles;
    ScanLimits limits{max_particles, std::max(1, g.threads)};

    if (gate) {
        GateVerdict v = verify_gate_structure(p, dc, w, limits);
        json j{{"pass", v.pass},
               {"min_is_gamma", v.min_is_gamma},
               {"minimizers_in_P2", v.minimizers_in_P2},
               {"energy_drop_ok", v.energy_drop_ok},
               {"p1_reentry_ok", v.p1_reentry_ok},
               {"p1_members", v.p1_members},
               {"detail", v.detail}};
        emit(g, "oracle_gate.json", j.dump(2) + "\n");
        std::cout << "oracle-scan: gate " << (v.pass ? "pass" : "FAIL") << " (" << v.detail
                  << ")\n";
        return;
    }

    BoundaryScanReport r = scan_boundary_of_B(p, dc, w, limits);
    json j;
    if (r.found_exit) {
        j["gamma_num"] = r.min_threshold.numerator();
        j["gamma_den"] = r.min_threshold.denominator();
    } else {
        j["gamma_num"] = nullptr;
        j["gamma_den"] = nullptr;
    }
    json mins = json::array();
    int in_p2 = 0, drop_ok = 0;
    for (const ExitPair& e : r.minimizers) {
        mins.push_back(e.from_grid);
        in_p2 += e.from_in_P2 ? 1 : 0;
        drop_ok += e.energy_drop_ok ? 1 : 0;
    }
    j["minimizers"] = mins;
    j["counts"] = json{{"bitmaps_scanned", r.bitmaps_scanned},
                       {"states_in_B", r.states_in_B},
                       {"exits_seen", r.exits_seen},
                       {"minimizers", r.minimizers.size()},
                       {"minimizers_in_P2", in_p2},
                       {"minimizers_energy_drop_ok", drop_ok}};
    if (r.clause1_any) j["clause1_min"] = rat_str(r.clause1_min);
    j["elapsed"] = r.elapsed_seconds;
    emit(g, "oracle_scan.json", j.dump(2) + "\n");
    std::cout << "oracle-scan: min="
              << (r.found_exit ? rat_str(r.min_threshold) : std::string("none"))
              << " gamma=" << rat_str(dc.gamma) << " minimizers=" << r.minimizers.size()
              << " in_P2=" << in_p2 << " exits=" << r.exits_seen
              << " elapsed=" << num_str(r.elapsed_seconds) << "s\n";
}

void run_inequalities(const Globals& g, int kmax) {
    ModelParams p = load_params(g);
    DerivedConstants dc = derive_constants(p);
    InequalityReport rep = verify_proof_inequalities(p, dc, kmax);
    std::ostringstream csv;
    csv << "family,applicable,pass,checked,first_violation\n";
    int applicable = 0;
    for (const auto& f : rep.families) {
        applicable += f.applicable ? 1 : 0;
        csv << csv_quote(f.name) << ',' << (f.applicable ? 1 : 0) << ',' << (f.pass ? 1 : 0)
            << ',' << f.checked << ',' << csv_quote(f.first_violation) << "\n";
    }
    emit(g, "inequalities.csv", csv.str());
    std::cout << "inequalities: families=" << rep.families.size() << " applicable=" << applicable
              << " kmax=" << kmax << " all_pass=" << (rep.all_pass ? "true" : "false") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic lattice gas under Kawasaki dynamics: "
                 "exact landscape checks and Monte Carlo experiments"};
    app.require_subcommand(1);

    Globals g;
    app.add_option("--params", g.params_path, "parameter file (key=value)");
    app.add_option("--out", g.out_dir, "directory for CSV/JSON artifacts");
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads")->capture_default_str();

    std::string grid_path, rect_text, kernel_text = "plain", start_text = "zero";
    std::string targets_text = "one";
    std::vector<std::string> rect_texts;
    std::vector<int> window;
    double beta = 0, cap = 1e12;
    int runs = 100, n_states = 50, max_particles = 20, scan_max_particles = 14, kmax = 10;
    int max_l1 = 0, max_l2 = 0;
    bool gate_audit = false, gate_scan = false;

    auto* c_constants = app.add_subcommand("constants", "derived constants");
    c_constants->fallthrough();
    c_constants->callback([&] { run_constants(g); });

    auto* c_energy = app.add_subcommand("energy", "energy of a configuration or rectangle");
    c_energy->fallthrough();
    c_energy->add_option("--grid", grid_path, "grid file ('.'/'#' rows)");
    c_energy->add_option("--rect", rect_text, "rectangle L1xL2");
    c_energy->callback([&] { run_energy(g, grid_path, rect_text); });

    auto* c_classify = app.add_subcommand("classify", "descriptors and memberships");
    c_classify->fallthrough();
    c_classify->add_option("--grid", grid_path, "grid file ('.'/'#' rows)");
    c_classify->add_option("--rect", rect_text, "rectangle L1xL2, centered");
    c_classify->callback([&] { run_classify(g, grid_path, rect_text); });

    auto* c_barriers = app.add_subcommand("barriers", "mechanism barriers for rectangles");
    c_barriers->fallthrough();
    c_barriers->add_option("--rect", rect_text, "single rectangle L1xL2");
    c_barriers->add_option("--max-l1", max_l1, "sweep bound on l1 (default l0)");
    c_barriers->add_option("--max-l2", max_l2, "sweep bound on l2 (default l0)");
    c_barriers->callback([&] { run_barriers(g, rect_text, max_l1, max_l2); });

    auto* c_refpath = app.add_subcommand("refpath", "reference path 0 to 1 with energies");
    c_refpath->fallthrough();
    c_refpath->callback([&] { run_refpath(g); });

    auto* c_simulate = app.add_subcommand("simulate", "hitting runs from a start state");
    c_simulate->fallthrough();
    c_simulate->add_option("--beta", beta, "inverse temperature (overrides params)");
    c_simulate->add_option("--runs", runs, "independent runs")->capture_default_str();
    c_simulate->add_option("--cap", cap, "attempted-move cap")->capture_default_str();
    c_simulate->add_option("--kernel", kernel_text, "plain | rf")->capture_default_str();
    c_simulate->add_option("--start", start_text, "zero|full|rect:L1xL2|grid:FILE")
        ->capture_default_str();
    c_simulate->add_option("--targets", targets_text, "comma list: zero,one,gate,rect:L1xL2")
        ->capture_default_str();
    c_simulate->add_flag("--gate-audit", gate_audit, "test gate membership every step");
    c_simulate->callback([&] {
        run_simulate(g, beta, runs, cap, kernel_text, start_text, targets_text, gate_audit);
    });

    auto* c_fate = app.add_subcommand("fate", "race 0 vs 1 from centered rectangles");
    c_fate->fallthrough();
    c_fate->add_option("--rect", rect_texts, "rectangle L1xL2 (repeatable)");
    c_fate->add_option("--beta", beta, "inverse temperature (overrides params)");
    c_fate->add_option("--runs", runs, "runs per rectangle")->capture_default_str();
    c_fate->add_option("--cap", cap, "attempted-move cap")->capture_default_str();
    c_fate->add_option("--kernel", kernel_text, "plain | rf")->capture_default_str();
    c_fate->callback([&] { run_fate(g, rect_texts, beta, runs, cap, kernel_text); });

    auto* c_recur = app.add_subcommand("recurrence", "random starts, return to {0,1}");
    c_recur->fallthrough();
    c_recur->add_option("--beta", beta, "inverse temperature (overrides params)");
    c_recur->add_option("--runs", n_states, "random start states")->capture_default_str();
    c_recur->add_option("--max-particles", max_particles, "particles per random start")
        ->capture_default_str();
    c_recur->add_option("--kernel", kernel_text, "plain | rf")->capture_default_str();
    c_recur->callback([&] { run_recurrence(g, beta, n_states, max_particles, kernel_text); });

    auto* c_scan = app.add_subcommand("oracle-scan", "exhaustive boundary-of-B scan");
    c_scan->fallthrough();
    c_scan->add_option("--window", window, "window x0 y0 x1 y1 (interior coords)")
        ->expected(4);
    c_scan->add_option("--max-particles", scan_max_particles, "particle budget")
        ->capture_default_str();
    c_scan->add_flag("--gate", gate_scan, "run the full gate structure verdict");
    c_scan->callback([&] { run_oracle_scan(g, window, scan_max_particles, gate_scan); });

    auto* c_ineq = app.add_subcommand("inequalities", "proof inequality battery");
    c_ineq->fallthrough();
    c_ineq->add_option("--kmax", kmax, "family parameter bound")->capture_default_str();
    c_ineq->callback([&] { run_inequalities(g, kmax); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const lgk::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const lgk::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
