#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cotlab/contfrac.hpp"
#include "cotlab/fraction.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct cli_result {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_root() {
    static fs::path root = [] {
        fs::path p = fs::temp_directory_path() /
                     ("cotlab-cli-test-" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return root;
}

cli_result run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    fs::path out_file = scratch_root() / ("stdout." + std::to_string(counter));
    fs::path err_file = scratch_root() / ("stderr." + std::to_string(counter));
    ++counter;
    std::string cmd = env_prefix + std::string(COTLAB_CLI_PATH) + " " + args +
                      " > " + out_file.string() + " 2> " + err_file.string();
    int rc = std::system(cmd.c_str());
    cli_result r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = scratch_root() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("c0 subcommand emits the window table") {
    cli_result r = run_cli("c0 --b 101 --a0 0.51 --a1 0.99");
    CHECK(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(!ls.empty());
    CHECK(ls[0] == "b,r,c0,c0_over_b");
    auto expected = cotlab::coprime_window(cotlab::make_window(101, 0.51, 0.99));
    CHECK(ls.size() == expected.size() + 1);
    CHECK(r.err.find("[cotlab]") != std::string::npos);
    CHECK(r.out.find("[cotlab]") == std::string::npos);  // summaries stay on stderr
}

TEST_CASE("json output mirrors the csv field for field") {
    cli_result csv = run_cli("cf --x 7/10 --depth 5");
    cli_result json = run_cli("cf --x 7/10 --depth 5 --format json");
    REQUIRE(csv.code == 0);
    REQUIRE(json.code == 0);
    auto ls = lines_of(csv.out);
    REQUIRE(ls.size() >= 2);
    auto header = split_csv(ls[0]);
    nlohmann::json arr = nlohmann::json::parse(json.out);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == ls.size() - 1);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        auto fields = split_csv(ls[i + 1]);
        REQUIRE(fields.size() == header.size());
        for (std::size_t c = 0; c < header.size(); ++c) {
            const auto& cell = arr[i].at(header[c]);
            if (cell.is_number_integer())
                CHECK(std::stoll(fields[c]) == cell.get<long long>());
            else
                CHECK(std::strtod(fields[c].c_str(), nullptr) == cell.get<double>());
        }
    }
    // the c column is c(alpha, r-1) from the library
    cotlab::cf_expansion cf = cotlab::cf_expand(7, 10, 5, 1ll << 62);
    REQUIRE(arr.size() == 3);
    CHECK(arr[0].at("c").get<double>() == cotlab::c_alpha_r(cf, 0));
    CHECK(arr[1].at("c").get<double>() == cotlab::c_alpha_r(cf, 1));
    CHECK(arr[2].at("c").get<double>() == cotlab::c_alpha_r(cf, 2));
}

TEST_CASE("exit codes distinguish parse, domain, and precision failures") {
    CHECK(run_cli("c0 --b 101 --not-a-flag 3").code == 2);
    CHECK(run_cli("").code == 2);  // a subcommand is required
    CHECK(run_cli("g --alpha 1.5").code == 3);
    CHECK(run_cli("moments --estimator cotangent --b 50 --k 1").code == 3);
    CHECK(run_cli("cf --x golden --precision-bits 64 --depth 60").code == 4);
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("reruns and worker counts leave the output byte-identical") {
    fs::path c1 = fresh_dir("cache-workers-1");
    fs::path c2 = fresh_dir("cache-workers-2");
    std::string base = "tail --samples 10000 --N 2000 --seed 5 --g-method direct "
                       "--tmin 0.5 --tmax 2.5 --tcount 5 ";
    cli_result a = run_cli(base + "--workers 1 --cache-dir " + c1.string());
    cli_result b = run_cli(base + "--workers 1 --cache-dir " + c1.string());
    cli_result c = run_cli(base + "--workers 3 --cache-dir " + c2.string());
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);

    cli_result m1 = run_cli("moments --k 1 --k 2 --samples 10000 --N 2000 "
                            "--g-method direct --seed 5 --workers 1");
    cli_result m3 = run_cli("moments --k 1 --k 2 --samples 10000 --N 2000 "
                            "--g-method direct --seed 5 --workers 3");
    REQUIRE(m1.code == 0);
    CHECK(m1.out == m3.out);
}

TEST_CASE("g sample cache misses, hits, and survives corruption") {
    fs::path cache = fresh_dir("cache-roundtrip");
    std::string cmd = "tail --samples 10000 --N 2000 --seed 6 --g-method direct "
                      "--tmin 0.5 --tmax 2.0 --tcount 4 --cache-dir " + cache.string();
    cli_result miss = run_cli(cmd);
    REQUIRE(miss.code == 0);
    CHECK(miss.err.find("cache miss") != std::string::npos);
    cli_result hit = run_cli(cmd);
    CHECK(hit.err.find("cache hit") != std::string::npos);
    CHECK(hit.out == miss.out);

    fs::path sample_file;
    for (const auto& e : fs::directory_iterator(cache))
        if (e.path().filename().string().rfind("gsamp-", 0) == 0) sample_file = e.path();
    REQUIRE(!sample_file.empty());
    // flip one byte in the payload; the checksum must reject the file
    std::fstream f(sample_file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(64);
    char byte = 0;
    f.read(&byte, 1);
    f.seekp(64);
    byte = static_cast<char>(byte ^ 0x5a);
    f.write(&byte, 1);
    f.close();
    cli_result rebuilt = run_cli(cmd);
    CHECK(rebuilt.err.find("corrupt or stale") != std::string::npos);
    CHECK(rebuilt.out == miss.out);
    cli_result again = run_cli(cmd);
    CHECK(again.err.find("cache hit") != std::string::npos);
}

TEST_CASE("divisor table cache is reused") {
    fs::path cache = fresh_dir("cache-divisor");
    std::string cmd = "g --alpha 0.3257548825693131 --g-method fourier --M 20000 "
                      "--cache-dir " + cache.string();
    cli_result miss = run_cli(cmd);
    REQUIRE(miss.code == 0);
    CHECK(miss.err.find("divisor cache miss") != std::string::npos);
    cli_result hit = run_cli(cmd);
    CHECK(hit.err.find("divisor cache hit") != std::string::npos);
    CHECK(hit.out == miss.out);
}

TEST_CASE("config files supply defaults that flags override") {
    fs::path cache = fresh_dir("cache-config");
    fs::path cfgfile = scratch_root() / "lab.cfg";
    {
        std::ofstream f(cfgfile);
        f << "samples=10000\nN=2000\nseed=9\ng-method=direct\n";
    }
    std::string tailargs = " --tmin 0.5 --tmax 2.0 --tcount 4 --cache-dir ";
    cli_result from_config =
        run_cli("tail --config " + cfgfile.string() + tailargs + cache.string());
    cli_result explicit_args =
        run_cli("tail --samples 10000 --N 2000 --seed 9 --g-method direct" +
                tailargs + cache.string());
    REQUIRE(from_config.code == 0);
    CHECK(from_config.out == explicit_args.out);
    cli_result overridden =
        run_cli("tail --config " + cfgfile.string() + " --seed 10" + tailargs +
                cache.string());
    cli_result explicit_ten =
        run_cli("tail --samples 10000 --N 2000 --seed 10 --g-method direct" +
                tailargs + cache.string());
    CHECK(overridden.out == explicit_ten.out);
    CHECK(overridden.out != from_config.out);
}

TEST_CASE("cache directory can come from the environment") {
    fs::path cache = fresh_dir("cache-env");
    cli_result r = run_cli("tail --samples 10000 --N 2000 --seed 12 "
                           "--g-method direct --tmin 0.5 --tmax 2.0 --tcount 4",
                           "COTLAB_CACHE=" + cache.string() + " ");
    REQUIRE(r.code == 0);
    bool found = false;
    for (const auto& e : fs::directory_iterator(cache))
        if (e.path().filename().string().rfind("gsamp-", 0) == 0) found = true;
    CHECK(found);
}

TEST_CASE("emeasure appends the infinite-depth row on request") {
    cli_result r = run_cli("emeasure --z-grid 3 --z-grid 6 --rmax 2 --inf "
                           "--samples 2000 --seed 3");
    REQUIRE(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 1 + 2 * 4);  // per z: r = 0,1,2 plus the r=-1 row
    CHECK(ls[0] == "z,r,estimate,stderr,bound,n_samples,seed");
    CHECK(split_csv(ls[4])[1] == "-1");
    CHECK(split_csv(ls[8])[1] == "-1");
    cli_result plain = run_cli("emeasure --z-grid 3 --rmax 2 --samples 2000 --seed 3");
    CHECK(lines_of(plain.out).size() == 1 + 3);
}

TEST_CASE("output lands in a file when requested") {
    fs::path out = scratch_root() / "c0.csv";
    cli_result r = run_cli("c0 --b 13 --a0 0.5 --a1 1.0 --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::string contents = slurp(out);
    CHECK(contents.rfind("b,r,c0,c0_over_b", 0) == 0);
    CHECK(lines_of(contents).size() == 7);  // 6 residues in the upper half window
}
