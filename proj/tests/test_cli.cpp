#include "lgk/model.hpp"
#include "test_util.hpp"
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

// ==== harness: drive the installed binary through a shell ====

static std::string bin_path() {
    const char* p = std::getenv("LGKAW_BIN");
    REQUIRE(p != nullptr && *p != '\0', "LGKAW_BIN must point at the tool binary");
    return std::string(p);
}

struct CmdResult {
    int code = -1;
    std::string out;
};

static CmdResult run_cmd(const std::string& args) {
    std::string full = bin_path() + " " + args + " 2>/dev/null";
    FILE* f = popen(full.c_str(), "r");
    REQUIRE(f != nullptr, "popen failed");
    std::string out;
    char buf[4096];
    size_t k;
    while ((k = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, k);
    int st = pclose(f);
    CmdResult r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.out = out;
    return r;
}

static bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

static void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good(), "cannot write " << p.string());
    out << text;
}

static std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good(), "cannot read " << p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

static std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

static std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string f;
    while (std::getline(is, f, ',')) out.push_back(f);
    return out;
}

static fs::path g_dir;

static std::string psmall_path() { return (g_dir / "psmall.cfg").string(); }

// ==== individual subcommands ====

static void test_constants() {
    CmdResult r = run_cmd("constants --params " + psmall_path());
    REQUIRE(r.code == 0, "constants exit code " << r.code);
    REQUIRE(r.out == "constants: regime=strong eps=2/5 l2star=3 deltafrac=1/2 l1star=8 "
                     "lbar=6 sstar=8 gamma=63/5 vstar=21/5\n",
            "constants line, got: " << r.out);

    fs::path out = g_dir / "const_out";
    CmdResult r2 = run_cmd("constants --params " + psmall_path() + " --out " + out.string());
    REQUIRE(r2.code == 0, "constants --out exit code");
    std::string j = read_file(out / "constants.json");
    REQUIRE(contains(j, "\"gamma\": \"63/5\""), "json gamma");
    REQUIRE(contains(j, "\"gate_particles\": 11"), "json gate count");
}

static void test_energy() {
    CmdResult r = run_cmd("energy --params " + psmall_path() + " --rect 5x3");
    REQUIRE(r.code == 0, "energy rect exit code");
    REQUIRE(r.out == "energy: rect=5x3 H=8 (8)\n", "rect energy line, got: " << r.out);

    CmdResult g = run_cmd("energy --params " + psmall_path() + " --grid " +
                          (g_dir / "r53.grid").string());
    REQUIRE(g.code == 0, "energy grid exit code");
    REQUIRE(g.out == "energy: H=8 (8) lemma7=agree particles=15 n=0 s=8 v=0\n",
            "grid energy line, got: " << g.out);
}

static void test_classify() {
    CmdResult r = run_cmd("classify --params " + psmall_path() + " --rect 5x3");
    REQUIRE(r.code == 0, "classify exit code");
    std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(!lines.empty() &&
                lines.back() == "classify: B=false rule=none P1=false P2=false H=8",
            "critical rectangle is outside B, got: " << r.out);

    CmdResult r2 = run_cmd("classify --params " + psmall_path() + " --rect 3x3");
    std::vector<std::string> lines2 = split_lines(r2.out);
    REQUIRE(!lines2.empty() &&
                lines2.back() == "classify: B=true rule=clause 1 P1=false P2=false H=42/5",
            "subcritical square is inside B, got: " << r2.out);
}

static void test_refpath() {
    fs::path a = g_dir / "rp_a", b = g_dir / "rp_b";
    CmdResult ra = run_cmd("refpath --params " + psmall_path() + " --out " + a.string());
    REQUIRE(ra.code == 0, "refpath exit code");
    REQUIRE(contains(ra.out, "steps=1064 max=63/5 gamma=63/5 argmax_rows=3"),
            "refpath summary, got: " << ra.out);
    CmdResult rb = run_cmd("refpath --params " + psmall_path() + " --out " + b.string());
    REQUIRE(rb.code == 0, "second refpath exit code");

    std::string csv_a = read_file(a / "refpath.csv");
    REQUIRE(csv_a == read_file(b / "refpath.csv"), "artifact is reproducible");

    std::vector<std::string> lines = split_lines(csv_a);
    REQUIRE(lines.size() == 1066u, "header plus 1065 state rows, got " << lines.size());
    REQUIRE(lines[0] == "step,stage,s,particles,energy_num,energy_den,inP1,inP2", "header");
    REQUIRE(lines[1] == "0,2,0,0,0,1,0,0", "initial row");
    int at_gamma = 0, p1_at_gamma = 0, p2_at_gamma = 0;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::vector<std::string> f = split_csv(lines[i]);
        REQUIRE(f.size() == 8u, "row arity at line " << i);
        if (f[4] == "63" && f[5] == "5") {
            ++at_gamma;
            p1_at_gamma += f[6] == "1";
            p2_at_gamma += f[7] == "1";
        }
    }
    REQUIRE(at_gamma == 3, "rows at the saddle energy");
    REQUIRE(p1_at_gamma == 2 && p2_at_gamma == 1, "saddle rows split between the families");
    std::vector<std::string> last = split_csv(lines.back());
    REQUIRE(last[4] == "-48" && last[5] == "5", "final energy is H(full)");
    REQUIRE(last[3] == "144", "final particle count");
}

static void test_simulate_determinism() {
    std::string base = "simulate --params " + psmall_path() +
                       " --beta 1.0 --runs 8 --cap 20000 --kernel plain --start zero"
                       " --targets one --seed 5";
    fs::path d1 = g_dir / "sim1", d2 = g_dir / "sim2", d3 = g_dir / "sim3";
    CmdResult r1 = run_cmd(base + " --threads 1 --out " + d1.string());
    CmdResult r2 = run_cmd(base + " --threads 3 --out " + d2.string());
    REQUIRE(r1.code == 0 && r2.code == 0, "simulate exit codes");
    REQUIRE(contains(r1.out, "runs=8 zero=0 one=0 gate=0 rect=0 capped=8 cap_exceeded=1"),
            "all runs capped, got: " << r1.out);
    REQUIRE(read_file(d1 / "simulate.csv") == read_file(d2 / "simulate.csv"),
            "thread count does not change the samples");
    CmdResult r3 = run_cmd("simulate --params " + psmall_path() +
                           " --beta 1.0 --runs 8 --cap 20000 --kernel plain --start zero"
                           " --targets one --seed 6 --threads 2 --out " +
                           d3.string());
    REQUIRE(r3.code == 0, "third simulate exit code");
    REQUIRE(read_file(d1 / "simulate.csv") != read_file(d3 / "simulate.csv"),
            "master seed changes the samples");
}

static void test_barriers() {
    CmdResult r = run_cmd("barriers --params " + psmall_path() + " --rect 5x3");
    REQUIRE(r.code == 0, "barriers exit code");
    REQUIRE(contains(r.out, "l1,l2,kind,value,value_f,region,cheapest"), "csv header");
    REQUIRE(contains(r.out, "5,3,add_column,21/5,4.2,C',add_column"), "cheapest mechanism row");
    REQUIRE(contains(r.out, "5,3,add_row,31/5,6.2,C',add_column"), "row growth row");
    REQUIRE(contains(r.out, "barriers: rects=1 rows=6"), "summary line");
}

static void test_inequalities() {
    CmdResult r = run_cmd("inequalities --params " + psmall_path() + " --kmax 6");
    REQUIRE(r.code == 0, "inequalities exit code");
    REQUIRE(contains(r.out, "families=26"), "family count, got: " << r.out);
    REQUIRE(contains(r.out, "all_pass=true"), "battery passes, got: " << r.out);
}

// ==== failure modes keep their exit codes ====

static void test_exit_codes() {
    REQUIRE(run_cmd("bogus").code == 2, "unknown subcommand");
    REQUIRE(run_cmd("constants").code == 2, "missing parameter file");
    REQUIRE(run_cmd("energy --params " + psmall_path()).code == 2, "energy needs an input");
    REQUIRE(run_cmd("constants --params " + (g_dir / "bad.cfg").string()).code == 2,
            "malformed rational");
    REQUIRE(run_cmd("constants --params " + (g_dir / "degen.cfg").string()).code == 3,
            "degenerate parameters are a domain error");
    REQUIRE(run_cmd("oracle-scan --params " + psmall_path() +
                    " --window 4 4 6 6 --max-particles 8")
                    .code == 3,
            "window too small for the critical rectangle");
}

int main() {
    g_dir = fs::temp_directory_path() / "lgkaw_cli_test";
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);

    write_file(g_dir / "psmall.cfg", "u1=3\nu2=1\ndelta=18/5\nl0=12\n");
    write_file(g_dir / "bad.cfg", "u1=3\nu2=1\ndelta=pi\nl0=12\n");
    write_file(g_dir / "degen.cfg", "u1=3\nu2=2\ndelta=24/5\nl0=12\n");

    // R(5,3) anchored at (3,4) in the 14x14 box, rows written top first
    {
        lgk::Config c = lgk::Config::empty(12);
        for (int y = 4; y <= 6; ++y)
            for (int x = 3; x <= 7; ++x) c.set(x, y, true);
        std::string text;
        for (int y = 13; y >= 0; --y) {
            for (int x = 0; x < 14; ++x) text += c.at(x, y) ? '#' : '.';
            text += '\n';
        }
        write_file(g_dir / "r53.grid", text);
    }

    test_constants();
    test_energy();
    test_classify();
    test_refpath();
    test_simulate_determinism();
    test_barriers();
    test_inequalities();
    test_exit_codes();
    return test_summary("test_cli");
}
