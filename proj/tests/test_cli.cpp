#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cudseq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::ordered_json json_of(const Result& r) { return nlohmann::ordered_json::parse(r.out); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cudseq_test_" + name);
}

}  // namespace

TEST_CASE("ford") {
  CHECK(run({"ford", "--base", "2", "--order", "3", "--format", "inline"}).out == "0,0,0,1,0,1,1,1\n");
  CHECK(run({"ford", "--base", "3", "--order", "3", "--format", "inline"}).out ==
        "0,0,0,1,0,0,2,0,1,1,0,1,2,0,2,1,0,2,2,1,1,1,2,1,2,2,2\n");
  CHECK(run({"ford", "--base", "1", "--order", "1", "--format", "inline"}).out == "0\n");
  CHECK(run({"ford", "--base", "2", "--order", "2"}).out == "# base=2 order=2 len=4\n0\n0\n1\n1\n");
  CHECK(run({"ford", "--base", "2", "--order", "2", "--format", "binary"}).out.substr(0, 5) ==
        std::string("CUDS\x01", 5));
  CHECK(run({"ford", "--base", "0", "--order", "3"}).code == 2);
  CHECK(run({"ford", "--base", "2"}).code == 2);
  CHECK(run({"ford", "--base", "2", "--order", "200"}).code == 3);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("gen") {
  CHECK(run({"gen", "--variant", "l", "--t", "id", "--count", "9"}).out ==
        "0/1\n0/2\n0/2\n1/2\n1/2\n0/2\n0/2\n1/2\n1/2\n");
  CHECK(run({"gen", "--variant", "knuth", "--count", "8"}).out == "0/2\n1/2\n0/2\n1/2\n0/2\n1/2\n0/2\n1/2\n");
  CHECK(run({"gen", "--variant", "l", "--t", "sq", "--count", "1"}).out == "0/1\n");
  CHECK(run({"gen", "--variant", "l", "--t", "id", "--count", "5", "--format", "csv"}).out ==
        "0\n0\n0\n0.5\n0.5\n");
  CHECK(run({"gen", "--variant", "knuth", "--t", "id", "--count", "8"}).code == 2);
  CHECK(run({"gen", "--variant", "l", "--count", "8"}).code == 2);
  CHECK(run({"gen", "--variant", "l", "--t", "cube", "--count", "8"}).code == 2);
}

TEST_CASE("locate and term") {
  CHECK(run({"locate", "--t", "id", "10"}).out == "r=3 q=0 p=1\n");
  CHECK(run({"locate", "--t", "sq", "1"}).out == "r=1 q=0 p=1\n");
  CHECK(run({"locate", "--t", "sq", "5"}).out == "r=2 q=0 p=4\n");
  CHECK(run({"locate", "--t", "sq", "0"}).code == 2);
  CHECK(run({"locate", "--t", "sq", "340282366920938463463374607431768211455"}).code == 3);
  CHECK(run({"term", "--t", "id", "36"}).out == "2/3\n");
}

TEST_CASE("verify") {
  const Result best = run({"verify", "best", "--base", "2", "--order", "3"});
  CHECK(best.code == 0);
  const auto b = json_of(best);
  CHECK(b["op"] == "verify.best");
  CHECK(b["result"]["formula"] == 2);
  CHECK(b["result"]["enumerated"] == 2);
  CHECK(b["result"]["ford_is_least"] == true);

  const Result big = run({"verify", "best", "--base", "2", "--order", "6"});
  CHECK(big.code == 0);
  CHECK(json_of(big)["result"]["formula"] == 67108864);
  CHECK(json_of(big)["result"]["enumerated"].is_null());

  const Result l2 = run({"verify", "lemma2", "--n", "3", "--ell", "1"});
  CHECK(l2.code == 0);
  CHECK(std::abs(json_of(l2)["result"]["abs"].get<double>()) < 1e-9 * 27);
  CHECK(json_of(l2)["result"]["multiplicity"] == nlohmann::ordered_json::array({9, 9, 9}));

  const Result db = run({"verify", "debruijn", "--base", "2", "--order", "1"});
  CHECK(db.code == 0);
  CHECK(json_of(db)["result"]["is_debruijn"] == true);

  const Result l1 = run({"verify", "lemma1", "--n", "3", "--box", "0:0.3333333333333333"});
  CHECK(l1.code == 0);
  CHECK(json_of(l1)["result"]["window"]["count"] == 9);

  const Result sweep = run({"verify", "lemma1", "--n", "4", "--samples", "30"});
  CHECK(sweep.code == 0);
  CHECK(json_of(sweep)["result"]["boxes"] == 90);
  CHECK(json_of(sweep)["result"]["violations"] == 0);

  const Result all2 = run({"verify", "lemma2", "--n", "4"});
  CHECK(all2.code == 0);
  CHECK(json_of(all2)["result"]["vectors"] == 6 + 36 + 216);

  const Result p3 = run({"verify", "prop3"});
  CHECK(p3.code == 0);
  CHECK(json_of(p3)["result"]["rows"].size() == 12);

  CHECK(run({"verify", "lemma1"}).code == 2);
  CHECK(run({"verify", "lemma1", "--n", "9"}).code == 3);
  CHECK(run({"verify", "nothing"}).code == 2);
}

TEST_CASE("stats") {
  const Result bc = run({"stats", "boxcount", "--source", "l:sq", "--box", "0:1", "--count", "50"});
  CHECK(bc.code == 0);
  const auto j = json_of(bc);
  CHECK(j["op"] == "boxcount");
  CHECK(j["N"] == 50);
  CHECK(j["result"]["nu"] == 50);
  CHECK(j["deviation"] == 0.0);

  const Result w = run({"stats", "weyl", "--source", "l:sq", "--ell", "1,1", "--count", "100000"});
  CHECK(w.code == 0);
  CHECK(json_of(w)["result"]["abs_over_n"].get<double>() >= 0.0);

  const Result conv =
      run({"stats", "converge", "--source", "l:sq", "--box", "0:0.5,0:0.5", "--checkpoints", "auto", "--max-n", "4"});
  CHECK(conv.code == 0);
  std::istringstream lines(conv.out);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "N,ratio,deviation");
  std::vector<std::string> ns;
  while (std::getline(lines, row)) ns.push_back(row.substr(0, row.find(',')));
  CHECK(ns == std::vector<std::string>{"1", "17", "260", "4356"});

  const Result perms = run({"stats", "perms", "--source", "l:sq", "--k", "3", "--count", "5000"});
  CHECK(perms.code == 0);
  CHECK(json_of(perms)["result"]["patterns"].size() == 6);
  CHECK(json_of(perms)["result"]["patterns"][0]["ranks"] == "012");

  const Result disc = run({"stats", "discrepancy", "--source", "knuth", "--k", "1", "--grid", "2", "--count", "8"});
  CHECK(disc.code == 0);
  CHECK(json_of(disc)["result"]["estimate"] == 0.0);

  CHECK(run({"stats", "boxcount", "--source", "l:sq", "--box", "0:1"}).code == 2);
  CHECK(run({"stats", "boxcount", "--source", "nowhere", "--box", "0:1", "--count", "5"}).code == 2);
  CHECK(run({"stats", "boxcount", "--source", "l:sq", "--box", "0.5:0.2", "--count", "5"}).code == 2);
}

TEST_CASE("threads do not change stats output") {
  for (const std::string op : {"boxcount", "weyl", "perms", "discrepancy"}) {
    std::vector<std::string> args = {"stats", op, "--source", "l:id", "--count", "40000"};
    if (op == "boxcount") args.insert(args.end(), {"--box", "0:0.5,0.25:1"});
    if (op == "weyl") args.insert(args.end(), {"--ell", "2,-1"});
    const Result seq = run(args);
    args.insert(args.end(), {"--threads", "4"});
    auto par = json_of(run(args));
    par["params"].erase("threads");
    CHECK(seq.code == 0);
    CHECK(par.dump(2) + "\n" == seq.out);
  }
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"verify", "lemma1", "--n", "3", "--samples", "20"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> w = {"stats", "weyl", "--source", "knuth", "--ell", "1", "--count", "3000"};
  CHECK(run(w).out == run(w).out);
}

TEST_CASE("gen output read back through file: gives the same counts") {
  const auto path = temp_file("roundtrip.txt");
  CHECK(run({"gen", "--variant", "l", "--t", "sq", "--count", "6000", "--out", path.string()}).code == 0);
  const std::string file = "file:" + path.string();
  for (const std::string box : {"0:0.5", "0:0.5,0.5:1", "0.2:0.7,0:1,0:0.4"}) {
    const auto direct = json_of(run({"stats", "boxcount", "--source", "l:sq", "--box", box, "--count", "5990"}));
    const auto reread = json_of(run({"stats", "boxcount", "--source", file, "--box", box, "--count", "5990"}));
    CHECK(direct["result"] == reread["result"]);
  }
  const auto all = json_of(run({"stats", "weyl", "--source", file, "--ell", "1"}));
  CHECK(all["N"] == 6000);
  CHECK(run({"stats", "boxcount", "--source", file, "--box", "0:1", "--count", "6001"}).code == 1);
  std::filesystem::remove(path);
}

TEST_CASE("seed override changes the sampled boxes") {
  const std::vector<std::string> args = {"verify", "lemma1", "--n", "3", "--samples", "4"};
  const auto a = json_of(run(args));
  setenv("CUDSEQ_SEED", "12345", 1);
  const auto b = json_of(run(args));
  setenv("CUDSEQ_SEED", "oops", 1);
  CHECK(run(args).code == 2);
  unsetenv("CUDSEQ_SEED");
  CHECK(a["params"]["seed"] != b["params"]["seed"]);
  CHECK(b["params"]["seed"] == 12345);
}
