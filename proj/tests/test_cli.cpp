// End-to-end tests of the command-line tool: spawns the built binary and
// checks outputs, exit codes, and file artifacts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path work_dir()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("bilgamma_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args)
{
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = std::string(BILGAMMA_BIN) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return {code, slurp(out), slurp(err)};
}

fs::path write_config(const std::string& name, const std::string& text)
{
    const fs::path p = work_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

const char* kRefConfig =
    "alpha_plus = 1.55\n"
    "lambda_plus = 133.96\n"
    "alpha_minus = 0.94\n"
    "lambda_minus = 88.92\n"
    "r = 0\nq = 0\ns0 = 5000\n";

const char* kBumpedConfig =
    "alpha_plus = 1.55\n"
    "lambda_plus = 133.96\n"
    "alpha_minus = 0.94\n"
    "lambda_minus = 88.92\n"
    "r = 0.0012\nq = 0\ns0 = 5000\n";

} // namespace

TEST_CASE("solve esscher reports the reference tilt")
{
    const auto cfg = write_config("ref.cfg", kRefConfig);
    const auto r = run_cli("solve --config " + cfg.string() + " --kind esscher");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("theta = -5.280") != std::string::npos);
    CHECK(r.out.find("entropy = ") != std::string::npos);
    CHECK(r.out.find("martingale_residual = ") != std::string::npos);
}

TEST_CASE("solve memm and p-optimal kinds")
{
    const auto cfg = write_config("ref.cfg", kRefConfig);
    const auto r = run_cli("solve --config " + cfg.string() + " --kind memm");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("vartheta = -5.304") != std::string::npos);

    const auto r2 = run_cli("solve --config " + cfg.string() + " --kind p-optimal:2");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("theta_plus = -5.68") != std::string::npos);

    const auto r3 = run_cli("solve --config " + cfg.string() + " --kind p-optimal:0.5");
    CHECK(r3.exit_code == 1);
}

TEST_CASE("solve mmm: no-solution exit at the flat rate, success at the bumped rate")
{
    const auto cfg = write_config("ref.cfg", kRefConfig);
    const auto r = run_cli("solve --config " + cfg.string() + " --kind mmm");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("no solution") != std::string::npos);
    CHECK(r.err.find("outside [-1, 0]") != std::string::npos);

    const auto cfg2 = write_config("bumped.cfg", kBumpedConfig);
    const auto r2 = run_cli("solve --config " + cfg2.string() + " --kind mmm");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("convolution[") != std::string::npos);
    CHECK(r2.out.find("c = -0.48") != std::string::npos);
}

TEST_CASE("price: vanishing strike recovers the spot, memm pricing is refused")
{
    const auto cfg = write_config("ref.cfg", kRefConfig);
    const auto r = run_cli("price --config " + cfg.string() +
                           " --kind bilateral --strike 5e-6 --maturity 0.5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("price = 4999.9999") != std::string::npos);
    CHECK(r.out.find("nu = ") != std::string::npos);
    CHECK(r.out.find("truncation = ") != std::string::npos);

    const auto r2 = run_cli("price --config " + cfg.string() +
                            " --kind bilateral --strike 5000 --maturity 0.5");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("price = 16.868") != std::string::npos);

    const auto r3 = run_cli("price --config " + cfg.string() +
                            " --kind memm --strike 5000 --maturity 0.5");
    CHECK(r3.exit_code == 2);
}

TEST_CASE("surface: header, row count, determinism, single point")
{
    const auto cfg = write_config("ref.cfg", kRefConfig);
    const fs::path csv = work_dir() / "surf.csv";
    const std::string args = "surface --config " + cfg.string() +
                             " --kind bilateral --strikes 4500:250:5500 "
                             "--maturities 0.5,1 --out " + csv.string();
    CHECK(run_cli(args).exit_code == 0);
    const std::string first = slurp(csv);
    CHECK(first.rfind("maturity,strike,price,implied_vol\n", 0) == 0);
    int rows = 0;
    for (char ch : first)
        rows += (ch == '\n');
    CHECK(rows == 1 + 2 * 5);
    CHECK(first.find("\n0.5,4500,") != std::string::npos);

    CHECK(run_cli(args).exit_code == 0);
    CHECK(slurp(csv) == first); // byte-identical rerun

    const fs::path single = work_dir() / "single.csv";
    CHECK(run_cli("surface --config " + cfg.string() +
                  " --kind bilateral --strikes 5000 --maturities 1 --out " +
                  single.string())
              .exit_code == 0);
    int rows1 = 0;
    for (char ch : slurp(single))
        rows1 += (ch == '\n');
    CHECK(rows1 == 2);
}

TEST_CASE("hedge: delta under the minimal martingale measure")
{
    const auto cfg2 = write_config("bumped.cfg", kBumpedConfig);
    const auto r = run_cli("hedge --config " + cfg2.string() +
                           " --strike 5000 --maturity 0.5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("delta = 0.4") != std::string::npos);

    const auto cfg = write_config("ref.cfg", kRefConfig);
    const auto r2 = run_cli("hedge --config " + cfg.string() +
                            " --strike 5000 --maturity 0.5");
    CHECK(r2.exit_code == 2); // no minimal martingale measure at the flat rate
}

TEST_CASE("corrupted or missing configuration")
{
    const auto bad = write_config("bad.cfg", "alpha_plus = oops\n");
    CHECK(run_cli("solve --config " + bad.string() + " --kind esscher").exit_code == 1);
    CHECK(run_cli("solve --config /does/not/exist --kind esscher").exit_code == 1);
    CHECK(run_cli("solve --kind esscher").exit_code == 1); // missing required option
}

TEST_CASE("validate: condition-gated checks are skipped with a reason")
{
    const char* tiny =
        "alpha_plus = 1\nlambda_plus = 0.4\nalpha_minus = 1\nlambda_minus = 0.5\n"
        "r = 0\nq = 0\ns0 = 100\nsim.n_samples = 40000\n";
    const auto cfg = write_config("tiny.cfg", tiny);
    const auto r = run_cli("validate --config " + cfg.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("SKIP") != std::string::npos);
    CHECK(r.out.find("lambda_plus + lambda_minus <= 1") != std::string::npos);
    CHECK(r.out.find("all runnable checks passed") != std::string::npos);
}

TEST_CASE("seed override through the environment")
{
    const auto cfg = write_config("ref.cfg", kRefConfig);
    // the override must be parsed and must not break a normal run
    const auto r = run_cli("solve --config " + cfg.string() + " --kind esscher");
    CHECK(r.exit_code == 0);
    const std::string prefixed = "BILGAMMA_SEED=123 " + std::string(BILGAMMA_BIN) +
                                 " solve --config " + cfg.string() + " --kind esscher > " +
                                 (work_dir() / "seed_out.txt").string() + " 2>&1";
    CHECK(WEXITSTATUS(std::system(prefixed.c_str())) == 0);
    const std::string bad_seed = "BILGAMMA_SEED=notanumber " + std::string(BILGAMMA_BIN) +
                                 " solve --config " + cfg.string() + " --kind esscher > " +
                                 (work_dir() / "seed_err.txt").string() + " 2>&1";
    CHECK(WEXITSTATUS(std::system(bad_seed.c_str())) == 1);
}
