#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

fs::path workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "ahdyn_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Result cli(const std::string& args) {
    const auto out = workdir() / "stdout.txt";
    const std::string cmd = std::string(AHDYN_CLI) + " " + args + " > " + out.string() + " 2> " +
                            (workdir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

fs::path write(const std::string& name, const std::string& text) {
    const auto p = workdir() / name;
    std::ofstream(p) << text;
    return p;
}

const std::string kTiny =
    "name = tiny\n[ensemble]\nn_traj = 40\nt_final = 400\nrecord_stride = 100\nseed = 3\n"
    "[dynamics]\nmethods = ED, NM-ED\n";

}  // namespace

TEST_CASE("listing and validating") {
    const auto list = cli("list-presets");
    CHECK(list.code == 0);
    CHECK(list.out.find("eq_ke") != std::string::npos);
    CHECK(list.out.find("stride_study") != std::string::npos);

    const auto v = cli("validate " + write("tiny.ini", kTiny).string());
    CHECK(v.code == 0);
    CHECK(v.out.find("n_traj = 40") != std::string::npos);
    CHECK(cli("validate eq_pop").code == 0);
}

TEST_CASE("exit codes") {
    CHECK(cli("validate " + write("typo.ini", "[bath]\ngamma_l = 0.01\n").string()).code == 2);
    CHECK(cli("run no_such_preset").code == 2);
    CHECK(cli("run --bogus-flag default").code == 2);
    CHECK(cli("validate " + write("unstable.ini", "[bath]\ngamma = 0.5\n[dynamics]\nmethods = SH\n").string())
              .code == 3);
    CHECK(cli("run " + write("unstable2.ini", "[bath]\ngamma = 0.5\n[dynamics]\nmethods = SH\n").string() +
              " --out-dir " + (workdir() / "never").string())
              .code == 3);
    CHECK_FALSE(fs::exists(workdir() / "never" / "default"));
}

TEST_CASE("a small run writes CSVs and a manifest, reproducibly") {
    const auto cfg = write("tiny.ini", kTiny).string();
    const auto a = workdir() / "a", b = workdir() / "b", c = workdir() / "c";
    REQUIRE(cli("run " + cfg + " --out-dir " + a.string() + " --workers 1").code == 0);
    REQUIRE(cli("run " + cfg + " --out-dir " + b.string() + " --workers 4").code == 0);

    const auto ke = slurp(a / "tiny" / "NMED_ke.csv");
    CHECK(ke.rfind("t,mean,sem\n0,", 0) == 0);
    CHECK(std::count(ke.begin(), ke.end(), '\n') == 6);
    CHECK(slurp(a / "tiny" / "ED_pop.csv").rfind("t,mean,sem\n", 0) == 0);
    for (const auto* f : {"ED_ke.csv", "ED_pop.csv", "NMED_ke.csv", "NMED_pop.csv"})
        CHECK(slurp(a / "tiny" / f) == slurp(b / "tiny" / f));

    const auto manifest = a / "tiny" / "manifest.json";
    const auto text = slurp(manifest);
    CHECK(text.find("\"seed\"") != std::string::npos);
    CHECK(text.find("\"version\"") != std::string::npos);
    REQUIRE(cli("run " + manifest.string() + " --out-dir " + c.string()).code == 0);
    CHECK(slurp(c / "tiny" / "NMED_ke.csv") == ke);

    REQUIRE(cli("run " + cfg + " --out-dir " + c.string() + " --seed 4").code == 0);
    CHECK(slurp(c / "tiny" / "NMED_ke.csv") != ke);
}

TEST_CASE("flags override the configuration") {
    const auto cfg = write("tiny.ini", kTiny).string();
    const auto d = workdir() / "d";
    REQUIRE(cli("run " + cfg + " --out-dir " + d.string() + " --method SH --n-traj 10").code == 0);
    CHECK(fs::exists(d / "tiny" / "SH_ke.csv"));
    CHECK_FALSE(fs::exists(d / "tiny" / "ED_ke.csv"));
    CHECK(slurp(d / "tiny" / "manifest.json").find("\"n_traj\": \"10\"") != std::string::npos);
}
