#include "cndisc/cli/commands.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "cndisc/cli/csv_io.hpp"
#include "cndisc/cli/report_io.hpp"
#include "json.hpp"

namespace cndisc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        static std::atomic<int> counter{0};
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               ("cndisc_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "cndisc");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    static int run_binary(const std::string& args) {
        const std::string cmd = std::string("\"") + CNDISC_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static json load_json(const fs::path& p) { return json::parse(slurp(p)); }

    static std::size_t count(const std::string& hay, const std::string& needle) {
        std::size_t n = 0;
        for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
        return n;
    }

    void write_line_csv(const fs::path& p) {
        std::ofstream out(p);
        out << "t,value\n";
        for (int i = 0; i < 50; ++i) out << i * 0.1 << "," << 3.0 - 0.5 * i * 0.1 << "\n";
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST_F(Cli, StraightLineGivesNoKnots) {
    write_line_csv(path("line.csv"));
    ASSERT_EQ(run({"detect", path("line.csv").string(), "--x-col", "t", "--y-col", "value", "--out",
                   path("r.json").string()}),
              kExitOk)
        << err_.str();
    const json r = load_json(path("r.json"));
    EXPECT_EQ(r["schema_version"], 1);
    EXPECT_TRUE(r["knots"].empty());
    EXPECT_EQ(r["profile_path"], "r_profile.csv");
    EXPECT_EQ(r["config"]["order"], 1);
    EXPECT_EQ(r["config"]["support_left"], 8);
    EXPECT_EQ(r["config"]["confidence"], 0.95);
    EXPECT_EQ(r["config"]["input"]["y_col"], "value");
    EXPECT_TRUE(fs::exists(path("r_profile.csv")));
    EXPECT_EQ(read_profile_csv(path("r_profile.csv")).size(), 50u - 16u + 1u);
}

TEST_F(Cli, SynthThenDetectFindsBothKnots) {
    ASSERT_EQ(run({"synth", "--sigma", "0", "--num-points", "100", "--out", path("s.csv").string()}), kExitOk);
    ASSERT_EQ(run({"detect", path("s.csv").string(), "--order", "2", "--out", path("r.json").string(), "--plot",
                   path("r.svg").string()}),
              kExitOk)
        << err_.str();
    const auto report = read_report(path("r.json"));
    ASSERT_EQ(report.knots.size(), 2u);
    EXPECT_NEAR(report.knots[0].zeta, 0.3, 0.01);
    EXPECT_NEAR(report.knots[1].zeta, 0.7, 0.01);
    EXPECT_EQ(count(slurp(path("r.svg")), "class=\"knot-marker\""), 2u);
}

TEST_F(Cli, SynthOutputShape) {
    ASSERT_EQ(run({"synth", "--sigma", "0.05", "--num-points", "100", "--seed", "4", "--out",
                   path("a.csv").string()}),
              kExitOk);
    const auto table = read_csv(path("a.csv"));
    EXPECT_EQ(table.header, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(table.rows(), 100u);

    ASSERT_EQ(run({"synth", "--sigma", "0", "--out", path("clean.csv").string()}), kExitOk);
    const auto clean = read_csv(path("clean.csv"));
    EXPECT_EQ(clean.columns[0][0], 0.0);
    EXPECT_LT(std::abs(clean.columns[1][0]), 0.1);
}

TEST_F(Cli, SynthIsByteIdenticalUnderFixedSeed) {
    ASSERT_EQ(run({"synth", "--seed", "11", "--out", path("a.csv").string()}), kExitOk);
    ASSERT_EQ(run({"synth", "--seed", "11", "--out", path("b.csv").string()}), kExitOk);
    ASSERT_EQ(run({"synth", "--seed", "12", "--out", path("c.csv").string()}), kExitOk);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(Cli, EndToEndDeterminism) {
    for (const char* tag : {"1", "2"}) {
        ASSERT_EQ(run({"synth", "--seed", "21", "--out", path(std::string("s") + tag + ".csv").string()}), kExitOk);
        ASSERT_EQ(run({"detect", path(std::string("s") + tag + ".csv").string(), "--order", "2", "--threads", tag,
                       "--out", path(std::string("r") + tag + ".json").string(), "--profile",
                       path("p" + std::string(tag) + ".csv").string()}),
                  kExitOk);
    }
    EXPECT_EQ(slurp(path("p1.csv")), slurp(path("p2.csv")));
    json a = load_json(path("r1.json"));
    json b = load_json(path("r2.json"));
    EXPECT_EQ(a["knots"], b["knots"]);
    EXPECT_EQ(a["sigma_hat"], b["sigma_hat"]);
}

TEST_F(Cli, MissingFileExitsTwo) {
    EXPECT_EQ(run({"detect", path("absent.csv").string(), "--out", path("r.json").string()}), kExitIo);
    EXPECT_FALSE(err_.str().empty());
    EXPECT_FALSE(fs::exists(path("r.json")));
}

TEST_F(Cli, MalformedCsvExitsTwo) {
    std::ofstream(path("bad.csv")) << "x,y\n0,1\n1,banana\n";
    EXPECT_EQ(run({"detect", path("bad.csv").string(), "--out", path("r.json").string()}), kExitIo);
}

TEST_F(Cli, InvalidConfigurationExitsThree) {
    write_line_csv(path("line.csv"));
    const std::string in = path("line.csv").string();
    EXPECT_EQ(run({"detect", in, "--confidence", "1.5", "--out", path("r.json").string()}), kExitConfig);
    EXPECT_EQ(run({"detect", in, "--order", "2", "--degree-left", "1", "--out", path("r.json").string()}),
              kExitConfig);
    EXPECT_EQ(run({"detect", in, "--support-left", "60", "--out", path("r.json").string()}), kExitConfig);
    EXPECT_EQ(run({"detect", in, "--no-such-flag"}), kExitConfig);
    EXPECT_EQ(run({"montecarlo", "--m", "0", "--out", path("mc.json").string()}), kExitConfig);
    EXPECT_EQ(run({}), kExitConfig);
}

TEST_F(Cli, UnwritableOutputExitsTwo) {
    EXPECT_EQ(run({"synth", "--out", (path("no_dir") / "s.csv").string()}), kExitIo);
}

TEST_F(Cli, MonteCarloNoiselessAndRoundTrip) {
    ASSERT_EQ(run({"montecarlo", "--m", "10", "--sigma", "0", "--out", path("mc.json").string()}), kExitOk)
        << err_.str();
    const json j = load_json(path("mc.json"));
    EXPECT_EQ(j["schema_version"], 1);
    const auto s = summary_from_json(j);
    EXPECT_EQ(s.m, 10u);
    ASSERT_EQ(s.knots.size(), 2u);
    for (const auto& k : s.knots) EXPECT_DOUBLE_EQ(k.detection_rate, 1.0);
    EXPECT_EQ(summary_to_json(s), j);
}

TEST_F(Cli, ReportRoundTrip) {
    ASSERT_EQ(run({"synth", "--seed", "5", "--out", path("s.csv").string()}), kExitOk);
    ASSERT_EQ(run({"detect", path("s.csv").string(), "--order", "2", "--support-left", "15", "--support-right",
                   "15", "--out", path("r.json").string()}),
              kExitOk);
    const json j = load_json(path("r.json"));
    const auto stored = report_from_json(j);
    EXPECT_EQ(stored.config.approx.support_left, 15);
    EXPECT_EQ(stored.knots.size(), j["knots"].size());
    DetectionReport rebuilt;
    rebuilt.config = stored.config;
    rebuilt.sigma = stored.sigma_hat;
    rebuilt.knots = stored.knots;
    EXPECT_EQ(report_to_json(rebuilt, stored.profile_path, j["config"]["input"]), j);
}

TEST_F(Cli, PlotMarkersAndValidXml) {
    write_line_csv(path("line.csv"));
    ASSERT_EQ(run({"detect", path("line.csv").string(), "--out", path("line.json").string()}), kExitOk);
    ASSERT_EQ(run({"plot", "--report", path("line.json").string(), "--input", path("line.csv").string(), "--out",
                   path("line.svg").string()}),
              kExitOk)
        << err_.str();
    EXPECT_EQ(count(slurp(path("line.svg")), "knot-marker"), 0u);

    ASSERT_EQ(run({"synth", "--sigma", "0", "--out", path("s.csv").string()}), kExitOk);
    fs::create_directories(path("reports"));
    ASSERT_EQ(run({"detect", path("s.csv").string(), "--order", "2", "--out", path("reports/r.json").string()}),
              kExitOk);
    ASSERT_EQ(run({"plot", "--report", path("reports/r.json").string(), "--input", path("s.csv").string(), "--out",
                   path("s.svg").string()}),
              kExitOk)
        << err_.str();
    const std::string svg = slurp(path("s.svg"));
    EXPECT_EQ(count(svg, "class=\"knot-marker\""), 2u);

    for (const char* name : {"line.svg", "s.svg"}) {
        boost::property_tree::ptree tree;
        EXPECT_NO_THROW(boost::property_tree::read_xml(path(name).string(), tree)) << name;
        EXPECT_EQ(tree.count("svg"), 1u);
    }
}

TEST_F(Cli, PlotUnwritableExitsTwo) {
    write_line_csv(path("line.csv"));
    ASSERT_EQ(run({"detect", path("line.csv").string(), "--out", path("line.json").string()}), kExitOk);
    EXPECT_EQ(run({"plot", "--report", path("line.json").string(), "--input", path("line.csv").string(), "--out",
                   (path("missing_dir") / "x.svg").string()}),
              kExitIo);
}

TEST_F(Cli, FitWithReportKnots) {
    ASSERT_EQ(run({"synth", "--sigma", "0", "--out", path("s.csv").string()}), kExitOk);
    ASSERT_EQ(run({"detect", path("s.csv").string(), "--order", "2", "--out", path("r.json").string()}), kExitOk);
    ASSERT_EQ(run({"fit", path("s.csv").string(), "--report", path("r.json").string(), "--out",
                   path("spline.json").string(), "--curve", path("curve.csv").string()}),
              kExitOk)
        << err_.str();
    const json j = load_json(path("spline.json"));
    EXPECT_EQ(j["interior_knots"].size(), 2u);
    EXPECT_LT(j["rms_residual"].get<double>(), 0.01);
    EXPECT_EQ(read_csv(path("curve.csv")).columns.size(), 3u);
    EXPECT_EQ(run({"fit", path("s.csv").string(), "--knots", "0.5,0.5", "--out", path("bad.json").string()}),
              kExitConfig);
}

TEST_F(Cli, BinaryExitCodes) {
    write_line_csv(path("line.csv"));
    EXPECT_EQ(run_binary("detect \"" + path("line.csv").string() + "\" --out \"" + path("r.json").string() + "\""),
              0);
    EXPECT_EQ(run_binary("detect \"" + path("nope.csv").string() + "\""), 2);
    EXPECT_EQ(run_binary("detect \"" + path("line.csv").string() + "\" --confidence 2"), 3);
    EXPECT_EQ(run_binary("--help"), 0);
}

}  // namespace
}  // namespace cndisc::cli
