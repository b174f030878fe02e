#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string cli = LVP_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunResult run(const std::string& args, const fs::path& dir) {
    const fs::path out_file = dir / "stdout.txt";
    const std::string cmd = cli + " " + args + " > " + out_file.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    r.out = slurp(out_file);
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("lvp_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_config(const fs::path& path, const std::string& system_block,
                  const std::string& extra = "") {
    std::ofstream out(path);
    out << "[system]\n" << system_block << "\n" << extra;
}

const std::string running_system =
    "a11 = 2\na12 = 1\na21 = 1\na22 = 2\nr1 = 3\nr2 = 3\ntau = 3\n";

} // namespace

TEST_CASE("check: pass, fail and config errors") {
    const fs::path dir = fresh_dir("check");
    const fs::path cfg = dir / "run.cfg";

    write_config(cfg, running_system, "[output]\ndirectory = " + (dir / "out").string() + "\n");
    auto r = run("check --config " + cfg.string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(slurp(dir / "out" / "hypotheses.txt").find("PASS") != std::string::npos);

    // interaction form with a negative symmetric-part eigenvalue
    write_config(cfg, "a11 = 1\na12 = 3\na21 = 3\na22 = 1\nr1 = 4\nr2 = 4\ntau = 3\n",
                 "[output]\ndirectory = " + (dir / "out2").string() + "\n");
    r = run("check --config " + cfg.string(), dir);
    CHECK(r.exit_code == 1);
    const std::string rep = slurp(dir / "out2" / "hypotheses.txt");
    CHECK(rep.find("A1") != std::string::npos);
    CHECK(rep.find("FAIL") != std::string::npos);

    // missing tau
    std::ofstream(cfg) << "[system]\na11 = 2\na12 = 1\na21 = 1\na22 = 2\nr1 = 3\nr2 = 3\n";
    r = run("check --config " + cfg.string(), dir);
    CHECK(r.exit_code == 64);

    // unknown key
    write_config(cfg, running_system + "bogus = 1\n");
    r = run("check --config " + cfg.string(), dir);
    CHECK(r.exit_code == 64);
}

TEST_CASE("spectrum: catalog CSV and window failures") {
    const fs::path dir = fresh_dir("spectrum");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, running_system, "[output]\ndirectory = " + (dir / "out").string() + "\n");

    auto r = run("spectrum --config " + cfg.string(), dir);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "out" / "catalog.csv");
    std::istringstream lines(csv);
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    const bool more = static_cast<bool>(std::getline(lines, extra));
    CHECK(header == "branch,k,n,lambda,period,beta_level,amplitude");
    CHECK_FALSE(more);
    CHECK(row.find("1,1,1,0.38197186342054884,2.3999999999999999,") == 0);

    // byte-identical reruns
    auto r2 = run("spectrum --config " + cfg.string() + " --force", dir);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(dir / "out" / "catalog.csv") == csv);

    // overwrite refused without --force
    auto r3 = run("spectrum --config " + cfg.string(), dir);
    CHECK(r3.exit_code == 64);

    // tau too small for any winding number
    write_config(cfg, "a11 = 2\na12 = 1\na21 = 1\na22 = 2\nr1 = 3\nr2 = 3\ntau = 0.1\n");
    r = run("spectrum --config " + cfg.string() + " --force", dir);
    CHECK(r.exit_code == 2);

    // equal winding numbers on both branches
    write_config(cfg, "a11 = 1\na12 = 0.5\na21 = 0.5\na22 = 1\nr1 = 1.5\nr2 = 1.5\ntau = 4\n");
    r = run("spectrum --config " + cfg.string() + " --force", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("n1 == n2") != std::string::npos);
}

TEST_CASE("simulate: logistic anchor and equilibrium aperiodicity") {
    const fs::path dir = fresh_dir("simulate");

    auto r = run("simulate --logistic --alpha 1.7 --tau 1 --out " + (dir / "out").string() +
                     " --force",
                 dir);
    CHECK(r.exit_code == 0);
    REQUIRE(r.out.find("period=") == 0);
    const double period = std::stod(r.out.substr(7));
    CHECK(period > 3.7);
    CHECK(period < 4.3);
    const std::string traj = slurp(dir / "out" / "trajectory.csv");
    CHECK(traj.find("t,u1,u2,du1,du2") == 0);

    // equilibrium start never crosses its mean
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg,
                 "a11 = 2\na12 = 1\na21 = 1\na22 = 2\nr1 = 3\nr2 = 3\ntau = 0.6\n",
                 "[solver]\nt_end = 80\n[output]\ndirectory = " + (dir / "out2").string() + "\n");
    r = run("simulate --config " + cfg.string() + " --perturb 0 --force", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("period=nan confidence=0") == 0);

    // onset-proximate oscillation
    write_config(cfg,
                 "a11 = 2\na12 = 1\na21 = 1\na22 = 2\nr1 = 3\nr2 = 3\ntau = 0.6\n",
                 "[solver]\nt_end = 300\n[output]\ndirectory = " + (dir / "out3").string() + "\n");
    r = run("simulate --config " + cfg.string() + " --force", dir);
    CHECK(r.exit_code == 0);
    REQUIRE(r.out.find("period=") == 0);
    const double p2 = std::stod(r.out.substr(7));
    CHECK(p2 == doctest::Approx(2.5101).epsilon(5e-3));
}

TEST_CASE("find: orbit files and the no-orbit exit") {
    const fs::path dir = fresh_dir("find");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, running_system, "[output]\ndirectory = " + (dir / "out").string() + "\n");

    auto r = run("find --config " + cfg.string(), dir);
    CHECK(r.exit_code == 0);
    const std::string orbit = slurp(dir / "out" / "orbit.csv");
    CHECK(orbit.find("t,x1,x2") == 0);
    const std::string meta = slurp(dir / "out" / "orbit.meta");
    CHECK(meta.find("lambda=0.3845623") != std::string::npos);
    CHECK(meta.find("K=32") != std::string::npos);
    CHECK(slurp(dir / "out" / "verification.txt").find("VERIFIED") != std::string::npos);

    // filter to a mode that has no candidate
    r = run("find --config " + cfg.string() + " --k 7 --force", dir);
    CHECK(r.exit_code == 4);
}

TEST_CASE("certify: verdicts and exit codes") {
    const fs::path dir = fresh_dir("certify");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, running_system, "[output]\ndirectory = " + (dir / "out").string() + "\n");

    auto r = run("certify --config " + cfg.string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("EXISTS: non-stationary periodic solution, k0=1") == 0);
    const std::string kv = slurp(dir / "out" / "certificate.kv");
    CHECK(kv.find("verdict=EXISTS") != std::string::npos);
    CHECK(kv.find("k0=1") != std::string::npos);
    CHECK(kv.find("n1=0") != std::string::npos);
    CHECK(kv.find("n2=1") != std::string::npos);
    CHECK(kv.find("j=1") != std::string::npos);
    CHECK((kv.find("total_gamma_1=1") != std::string::npos ||
           kv.find("total_gamma_1=-1") != std::string::npos));
    CHECK(slurp(dir / "out" / "certificate.txt").find("== verdict ==") != std::string::npos);

    // zero delay: no window, note about the exclusion argument
    write_config(cfg, "a11 = 2\na12 = 1\na21 = 1\na22 = 2\nr1 = 3\nr2 = 3\ntau = 0\n",
                 "[output]\ndirectory = " + (dir / "out0").string() + "\n");
    r = run("certify --config " + cfg.string() + " --force", dir);
    CHECK(r.exit_code == 2);
    CHECK(slurp(dir / "out0" / "certificate.txt").find("zero delay") != std::string::npos);

    // cutoff floor above the candidate level: degenerate, exit 5
    write_config(cfg, running_system,
                 "[geometry]\nalpha0 = 0.95\n[output]\ndirectory = " + (dir / "out5").string() +
                     "\n");
    r = run("certify --config " + cfg.string() + " --force", dir);
    CHECK(r.exit_code == 5);

    // hypothesis failure
    write_config(cfg, "a11 = 1\na12 = 3\na21 = 3\na22 = 1\nr1 = 4\nr2 = 4\ntau = 3\n",
                 "[output]\ndirectory = " + (dir / "out1").string() + "\n");
    r = run("certify --config " + cfg.string() + " --force", dir);
    CHECK(r.exit_code == 1);
}

TEST_CASE("two-orbit fixture through the CLI") {
    const fs::path dir = fresh_dir("fixture");
    const fs::path cfg = dir / "run.cfg";
    // the steeper spectrum (mu tau = 18) needs a finer truncation to push the
    // collocation tail below the newton tolerance
    write_config(cfg, "a11 = 2\na12 = 1\na21 = 4\na22 = 5\nr1 = 3\nr2 = 9\ntau = 3\n",
                 "[solver]\nK = 48\n[output]\ndirectory = " + (dir / "out").string() + "\n");

    auto r = run("spectrum --config " + cfg.string(), dir);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "out" / "catalog.csv");
    int rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 3); // header + 2 candidates

    r = run("certify --config " + cfg.string() + " --force", dir);
    CHECK(r.exit_code == 0);
    const std::string kv = slurp(dir / "out" / "certificate.kv");
    CHECK(kv.find("k0=2") != std::string::npos);
    CHECK((kv.find("total_gamma_2=1") != std::string::npos ||
           kv.find("total_gamma_2=-1") != std::string::npos));

    // parallel candidate solves merge deterministically
    r = run("find --config " + cfg.string() + " --force", dir);
    CHECK(r.exit_code == 0);
    const std::string serial = slurp(dir / "out" / "orbit.csv");
    r = run("find --config " + cfg.string() + " --jobs 2 --force", dir);
    CHECK(r.exit_code == 0);
    CHECK(slurp(dir / "out" / "orbit.csv") == serial);
}

TEST_CASE("catalogs with repeated modes keep one total per level") {
    // at tau = 3.5 the steep branch carries windings up to 3: four candidates,
    // two of them at k = 2
    const fs::path dir = fresh_dir("multik");
    const fs::path cfg = dir / "run.cfg";
    write_config(cfg, "a11 = 2\na12 = 1\na21 = 4\na22 = 5\nr1 = 3\nr2 = 9\ntau = 3.5\n",
                 "[output]\ndirectory = " + (dir / "out").string() + "\n");

    auto r = run("spectrum --config " + cfg.string(), dir);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "out" / "catalog.csv");
    int rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 5); // header + 4 candidates

    r = run("certify --config " + cfg.string() + " --force", dir);
    CHECK(r.exit_code == 0);
    const std::string kv = slurp(dir / "out" / "certificate.kv");
    CHECK(kv.find("k0=3") != std::string::npos);
    CHECK(kv.find("total_gamma_3=") != std::string::npos);
    CHECK(kv.find("total_gamma_2=") == kv.rfind("total_gamma_2=")); // single line per level
}
