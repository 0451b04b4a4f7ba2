// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "nrep/io.hpp"

namespace nrep {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(NREP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("nrep_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) const {
    const std::string path = (dir_ / name).string();
    write_file(path, content);
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const char* kBellState = "nsector-state d=4 N=2\n1100 0.70710678118654752 0\n0011 0.70710678118654752 0\n";

TEST_F(Cli, MapWritesOperatorWithHeader) {
  const auto h = file("h.txt", "qubits=2\n1 ZZ\n");
  const Result r = run("map " + h);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# nrep ", 0), 0u);
  EXPECT_NE(r.out.find("# config command=map"), std::string::npos);
  const FermionOperator op = parse_fermion_operator(r.out);
  EXPECT_EQ(op.modes(), 4);
}

TEST_F(Cli, MapEmptyHamiltonianIsPenaltyOnly) {
  const Result r = run("map " + file("h.txt", "qubits=1\n") + " --penalty 3");
  EXPECT_EQ(r.code, 0);
  const FermionOperator op = parse_fermion_operator(r.out);
  EXPECT_EQ(op.modes(), 2);
  EXPECT_FALSE(op.empty());
}

TEST_F(Cli, MapParityEncoding) {
  const Result r = run("map " + file("h.txt", "qubits=1\n1 X\n") + " --encoding parity");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("encoding=parity"), std::string::npos);
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("map " + file("h.txt", "1 XXX\n")).code, 2);
  EXPECT_EQ(run("map " + path("missing.txt")).code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("check " + file("r.txt", "two-rdm d=4 N=2\n0 0 2 0\n") + " --beta 0.1").code, 2);
}

TEST_F(Cli, RdmWritesMatrixAndAlpha) {
  const auto s = file("s.txt", kBellState);
  const Result r = run("rdm " + s + " -o " + path("r.txt") + " --alpha " + path("a.csv"));
  EXPECT_EQ(r.code, 0);
  const TwoRDM rho = parse_two_rdm(read_file(path("r.txt")));
  EXPECT_NEAR(rho.matrix(0, 5).real(), 0.5, 1e-15);
  const std::string csv = read_file(path("a.csv"));
  EXPECT_NE(csv.find("index,observable,alpha\n"), std::string::npos);
  EXPECT_NE(csv.find("\n34,Z(2_4)"), std::string::npos);

  // Reading and rewriting the file reproduces it byte for byte.
  const Result again = run("rdm " + s);
  EXPECT_EQ(again.out, read_file(path("r.txt")));
}

TEST_F(Cli, CheckVerdicts) {
  const auto yes = file("yes.txt", "two-rdm d=4 N=2\n0 0 1 0\n");
  const Result r = run("check " + yes + " --beta 0.1");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict=YES"), std::string::npos);

  const auto no = file("no.txt", "two-rdm d=6 N=3\n0 0 1 0\n");
  EXPECT_EQ(run("check " + no + " --beta 0.5").code, 0);
  const Result scripted = run("check " + no + " --beta 0.5 --script");
  EXPECT_EQ(scripted.code, 1);
  EXPECT_NE(scripted.out.find("verdict=NO"), std::string::npos);
}

TEST_F(Cli, EnergyExactAndCap) {
  const auto h = file("h.txt", "qubits=1\n-1 Z\n");
  const Result r = run("energy " + h);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("energy=-1 method=exact"), std::string::npos);

  const auto big = file("big.txt", "qubits=2\n1 ZZ\n");
  EXPECT_EQ(run("energy " + big + " --sector-cap 3").code, 3);
  EXPECT_EQ(run("energy " + big, "NREP_SECTOR_CAP=3").code, 3);
}

TEST_F(Cli, EnergyEllipsoidWritesTrace) {
  const auto h = file("h.txt", "qubits=2\n-1 ZZ\n");
  const Result r = run("energy " + h + " --method ellipsoid --trace " + path("t.csv"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("converged=true"), std::string::npos);
  const std::string trace = read_file(path("t.csv"));
  EXPECT_NE(trace.find("iter,center_norm,volume_log,cut_type,best_value\n0,"), std::string::npos);
}

TEST_F(Cli, VerifyHonestAndWitness) {
  const auto s = file("s.txt", kBellState);
  ASSERT_EQ(run("rdm " + s + " -o " + path("r.txt")).code, 0);
  const Result honest = run("verify " + path("r.txt") + " --honest-from " + s + " --seed 3 --runs 2");
  EXPECT_EQ(honest.code, 0);
  EXPECT_NE(honest.out.find("accepted="), std::string::npos);
  EXPECT_NE(honest.out.find("seed=3"), std::string::npos);

  const auto vac = file("w.txt", "qubit-state qubits=4\n0000 1 0\n");
  const Result empty = run("verify " + path("r.txt") + " --witness " + vac + " --shots 100");
  EXPECT_EQ(empty.code, 0);
  EXPECT_NE(empty.out.find("accepted=false"), std::string::npos);
  EXPECT_NE(empty.out.find("acceptance=0\n"), std::string::npos);
  EXPECT_EQ(run("verify " + path("r.txt")).code, 2);
}

TEST_F(Cli, DualityReport) {
  const Result r = run("duality --d 5 --map-a " + path("a.txt"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("d=5 l=99\n"), std::string::npos);
  EXPECT_NE(read_file(path("a.txt")).find("coordinate-map rows=99 cols=99"), std::string::npos);
  EXPECT_EQ(run("duality --d 4").code, 2);
}

TEST_F(Cli, JsonMirror) {
  const auto h = file("h.txt", "qubits=1\n-1 Z\n");
  const Result r = run("energy " + h + " --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["method"], "exact");
  EXPECT_DOUBLE_EQ(j["result"]["energy"].get<double>(), -1.0);
}

}  // namespace
}  // namespace nrep
