#include "commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace lorentz::cli {
namespace {

using Mat = Matrix<double>;
namespace fs = std::filesystem;

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <typename Cmd>
Run run(Cmd cmd, Options opt, const std::string& stdin_text = {}) {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    if (opt.input.empty()) opt.input = "-";
    const int code = cmd(opt, Streams{in, out, err});
    return {code, out.str(), err.str()};
}

std::string field(const std::string& report, const std::string& key) {
    std::istringstream lines(report);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
    return "<missing>";
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("lorentz_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const auto path = (dir_ / name).string();
        std::ofstream(path) << text;
        return path;
    }

    static std::string slurp(const std::string& path) {
        std::ifstream in(path);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    fs::path dir_;
};

TEST_F(CliTest, CheckIdentityAccepted) {
    const auto r = run(cmd_check, {}, io::write_matrix(Mat::Identity(4, 4)));
    EXPECT_EQ(r.code, kOk);
    EXPECT_EQ(field(r.out, "is_automorphism"), "true");
    EXPECT_EQ(field(r.out, "mu"), "1");
    EXPECT_EQ(field(r.out, "cone_forward"), "true");
    EXPECT_EQ(field(r.out, "residual_congruence"), "0");
}

TEST_F(CliTest, CheckRejectsNonCongruent) {
    const auto r = run(cmd_check, {}, "1 0\n0 2\n");
    EXPECT_EQ(r.code, kRejected);
    EXPECT_EQ(field(r.out, "is_automorphism"), "false");
}

TEST_F(CliTest, CheckMalformedNamesTheRow) {
    const auto r = run(cmd_check, {}, R"({"n": 4, "data": [[1,0,0,0],[0,1,0,0],[0,0,1],[0,0,0,1]]})");
    EXPECT_EQ(r.code, kMalformed);
    EXPECT_NE(r.err.find("row 2"), std::string::npos) << r.err;
    Options missing;
    missing.input = (dir_ / "nope.json").string();
    EXPECT_EQ(run(cmd_check, missing).code, kMalformed);
}

TEST_F(CliTest, QuietPrintsNothing) {
    Options opt;
    opt.quiet = true;
    const auto r = run(cmd_check, opt, "1 0\n0 2\n");
    EXPECT_EQ(r.code, kRejected);
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, FactorBoostCanonical) {
    const auto r = run(cmd_factor, {}, io::write_matrix(boost_matrix(1.0, 3)));
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto file = io::read_factorization(r.out);
    const auto& f = std::get<CanonicalFactorization<double>>(file.factorization);
    EXPECT_NEAR(f.nu, 1, 1e-15);
    EXPECT_NEAR(f.alpha, 1, 1e-15);
    EXPECT_LE((f.V - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((f.U - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
    ASSERT_TRUE(file.reconstruction_residual);
    EXPECT_LE(*file.reconstruction_residual, 1e-12);
}

TEST_F(CliTest, FactorIdentityCompact) {
    Options opt;
    opt.form = "compact";
    const auto r = run(cmd_factor, opt, io::write_matrix(Mat::Identity(3, 3)));
    ASSERT_EQ(r.code, kOk);
    const auto f = std::get<CompactFactorization<double>>(io::read_factorization(r.out).factorization);
    EXPECT_EQ(f.nu, 1);
    EXPECT_EQ(f.c, Vector<double>::Zero(2));
    EXPECT_EQ(f.U, Mat::Identity(2, 2));
}

TEST_F(CliTest, FactorRejectsAndValidatesFlags) {
    EXPECT_EQ(run(cmd_factor, {}, "1 0\n0 2\n").code, kRejected);
    Options opt;
    opt.form = "polar";
    EXPECT_EQ(run(cmd_factor, opt, "1 0\n0 1\n").code, kMalformed);
}

TEST_F(CliTest, FactorSampledMatrixRoundTrip) {
    const Mat s = sample_automorphism<double>(6, 10.0, 0.1, 10.0, 5);
    const auto r = run(cmd_factor, {}, io::write_matrix(s));
    ASSERT_EQ(r.code, kOk);
    EXPECT_LE(*io::read_factorization(r.out).reconstruction_residual, 1e-8);
}

TEST_F(CliTest, ComposeExamples) {
    auto r = run(cmd_compose, {},
                 R"({"form": "canonical", "nu": 1, "alpha": 0, "V": [[1,0],[0,1]], "U": [[1,0],[0,1]]})");
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(io::read_matrix(r.out), Mat::Identity(3, 3));

    r = run(cmd_compose, {},
            R"({"form": "canonical", "nu": 2, "alpha": 1, "V": [[1,0],[0,1]], "U": [[1,0],[0,1]]})");
    ASSERT_EQ(r.code, kOk);
    EXPECT_LE((io::read_matrix(r.out) - 2 * boost_matrix(1.0, 3)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST_F(CliTest, ComposeInvariantViolationAndMalformed) {
    EXPECT_EQ(run(cmd_compose, {}, R"({"form": "compact", "nu": 1, "c": [0], "U": [[2]]})").code,
              kRejected);
    EXPECT_EQ(run(cmd_compose, {}, R"({"form": "compact", "nu": -1, "c": [0], "U": [[1]]})").code,
              kRejected);
    EXPECT_EQ(run(cmd_compose, {}, R"({"form": "compact", "nu": 1, "U": [[1]]})").code, kMalformed);
    EXPECT_EQ(run(cmd_compose, {}, "not json").code, kMalformed);
}

TEST_F(CliTest, CompactAndCanonicalComposeToTheSameMatrix) {
    const Mat s = sample_automorphism<double>(5, 4.0, 0.5, 3.0, 9);
    Options canon, compact;
    compact.form = "compact";
    const auto fc = run(cmd_factor, canon, io::write_matrix(s));
    const auto fp = run(cmd_factor, compact, io::write_matrix(s));
    const Mat a = io::read_matrix(run(cmd_compose, {}, fc.out).out);
    const Mat b = io::read_matrix(run(cmd_compose, {}, fp.out).out);
    EXPECT_LE((a - b).norm() / s.norm(), 1e-12);
    EXPECT_LE((a - s).norm() / s.norm(), 1e-12);
}

TEST_F(CliTest, SampleWritesAcceptedMatricesDeterministically) {
    Options opt;
    opt.n = 5;
    opt.count = 100;
    opt.seed = 17;
    opt.nu_min = 0.5;
    opt.nu_max = 4;
    opt.output = (dir_ / "a").string();
    ASSERT_EQ(run(cmd_sample, opt).code, kOk);
    opt.output = (dir_ / "b").string();
    ASSERT_EQ(run(cmd_sample, opt).code, kOk);
    for (int i = 0; i < 100; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "matrix_%05d.json", i);
        const auto a = slurp((dir_ / "a" / name).string());
        EXPECT_EQ(a, slurp((dir_ / "b" / name).string()));
        Options check;
        check.input = (dir_ / "a" / name).string();
        EXPECT_EQ(run(cmd_check, check).code, kOk) << name;
    }
}

TEST_F(CliTest, SampleAlgebraSubgroupToStdout) {
    Options opt;
    opt.n = 4;
    opt.alpha_max = 0;
    const auto r = run(cmd_sample, opt);
    ASSERT_EQ(r.code, kOk);
    const Mat s = io::read_matrix(r.out);
    EXPECT_EQ(s(0, 0), 1.0);
    EXPECT_LE(s.row(0).tail(3).norm() + s.col(0).tail(3).norm(), 1e-15);
}

TEST_F(CliTest, SampleBadRanges) {
    Options opt;
    opt.n = 4;
    opt.nu_min = 2;
    opt.nu_max = 1;
    EXPECT_EQ(run(cmd_sample, opt).code, kMalformed);
    opt = {};
    opt.n = 1;
    EXPECT_EQ(run(cmd_sample, opt).code, kMalformed);
    opt = {};
    opt.n = 3;
    opt.alpha_max = -1;
    EXPECT_EQ(run(cmd_sample, opt).code, kMalformed);
}

TEST_F(CliTest, VerifyBoostAndIdentity) {
    Options opt;
    opt.samples = 500;
    auto r = run(cmd_verify, opt, io::write_matrix(boost_matrix(1.0, 4)));
    EXPECT_EQ(r.code, kOk) << r.out;
    for (const char* key : {"residual_A1", "residual_A2", "residual_A3", "residual_B1", "residual_B2",
                            "residual_B3"})
        EXPECT_LE(std::stod(field(r.out, key)), 1e-12) << key;
    EXPECT_EQ(field(r.out, "verified"), "true");

    r = run(cmd_verify, opt, io::write_matrix(Mat::Identity(3, 3)));
    EXPECT_EQ(r.code, kOk);
    EXPECT_EQ(field(r.out, "residual_A3"), "0");
}

TEST_F(CliTest, VerifyPerturbedBoostFails) {
    Mat s = boost_matrix(1.0, 4);
    s(0, 0) += 1e-3;
    Options opt;
    opt.samples = 100;
    const auto r = run(cmd_verify, opt, io::write_matrix(s));
    EXPECT_EQ(r.code, kRejected);
    EXPECT_GT(std::stod(field(r.out, "residual_A1")), opt.tol);
    EXPECT_EQ(field(r.out, "verified"), "false");
}

TEST_F(CliTest, FactorComposeThroughFiles) {
    const auto input = write("s.json", io::write_matrix(sample_automorphism<double>(7, 10, 0.1, 10, 3)));
    Options f;
    f.input = input;
    f.output = (dir_ / "f.json").string();
    ASSERT_EQ(run(cmd_factor, f).code, kOk);
    Options c;
    c.input = f.output;
    c.output = (dir_ / "s2.json").string();
    ASSERT_EQ(run(cmd_compose, c).code, kOk);
    const Mat a = io::read_matrix(slurp(input));
    const Mat b = io::read_matrix(slurp(c.output));
    EXPECT_LE((a - b).norm() / a.norm(), 1e-12);
    EXPECT_EQ(io::write_matrix(io::read_matrix(slurp(c.output))), slurp(c.output));
}

}  // namespace
}  // namespace lorentz::cli
