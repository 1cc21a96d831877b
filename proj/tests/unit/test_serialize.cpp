#include "doctest.h"
#include "qsvm/error.hpp"
#include "qsvm/serialize.hpp"
#include "support.hpp"

using namespace qsvm;

TEST_CASE("QUBO JSON round trip") {
  std::mt19937_64 rng(51);
  const QuboProblem q = build_qubo(oracle::random_dataset(5, 3, rng), PrecisionVector::standard(), 0.5);
  const Json doc = qubo_to_json(q);
  CHECK(doc["n_points"] == 5);
  CHECK(doc["k_bits"] == 4);
  for (const auto& e : doc["quadratic"]) CHECK(e[0].get<int>() <= e[1].get<int>());
  const QuboProblem back = qubo_from_json(Json::parse(doc.dump()));
  CHECK((back.quadratic() - q.quadratic()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(back.linear() == q.linear());
  for (int t = 0; t < 20; ++t) {
    const Bits z = oracle::random_bits(q.size(), rng);
    CHECK(energy(back, z) == doctest::Approx(energy(q, z)).epsilon(1e-13));
  }

  const QuboProblem hand = build_qubo(oracle::two_point(), PrecisionVector({0.5}));
  const Json h = qubo_to_json(hand);
  CHECK(h["quadratic"].dump() == "[[0,0,0.125],[0,1,0.25],[1,1,0.125]]");
  CHECK(h["linear"].dump() == "[-0.5,-0.5]");
}

TEST_CASE("QUBO JSON rejects malformed documents") {
  CHECK_THROWS_AS(qubo_from_json(Json::parse(R"({"k_bits":1,"linear":[1],"quadratic":[]})")), InvalidArgument);
  CHECK_THROWS_AS(qubo_from_json(Json::parse(R"({"n_points":2,"k_bits":1,"linear":[1],"quadratic":[]})")),
                  InvalidArgument);
  CHECK_THROWS_AS(
      qubo_from_json(Json::parse(R"({"n_points":1,"k_bits":2,"linear":[1,1],"quadratic":[[1,0,2]]})")),
      InvalidArgument);
  CHECK_THROWS_AS(
      qubo_from_json(Json::parse(R"({"n_points":1,"k_bits":2,"linear":[1,1],"quadratic":[[0,5,2]]})")),
      InvalidArgument);
}

TEST_CASE("solution and model JSON") {
  const BinarySolution s{{1, 0, 1}, -1.5, 4};
  const Json sj = solution_to_json(s);
  CHECK(sj.dump() == R"({"bits":[1,0,1],"energy":-1.5,"read_index":4})");
  const BinarySolution sb = solution_from_json(sj);
  CHECK(sb.bits == s.bits);
  CHECK(sb.energy == s.energy);
  CHECK(sb.read_index == 4);
  CHECK_THROWS_AS(solution_from_json(Json::parse(R"({"bits":[2],"energy":0})")), InvalidArgument);

  const SvmModel m = recover_model(oracle::two_point(), Vector::Constant(2, 0.5));
  const Json mj = model_to_json(m);
  CHECK(mj.dump() == R"({"w":[1.0],"bias":0.0,"lambdas":[0.5,0.5],"support_indices":[0,1]})");
  const SvmModel mb = model_from_json(mj);
  CHECK(mb.w == m.w);
  CHECK(mb.bias == m.bias);
  CHECK(mb.support_indices == m.support_indices);
  CHECK(!normalizer_from_json(mj));

  const Normalizer n = Normalizer::fit(generate_blobs(6, 1, 1, 4.0), Normalization::z_score);
  const Json with = model_to_json(m, n);
  const auto nb = normalizer_from_json(with);
  REQUIRE(nb);
  CHECK(nb->method() == Normalization::z_score);
  CHECK(nb->offset() == n.offset());
  CHECK(nb->scale() == n.scale());
}

TEST_CASE("parameter JSON") {
  SaParams p;
  p.num_reads = 7;
  p.beta_final = 3.0;
  p.beta_initial = 0.5;
  p.schedule = Schedule::linear;
  const SaParams q = sa_params_from_json(sa_params_to_json(p));
  CHECK(q.num_reads == 7);
  CHECK(*q.beta_initial == 0.5);
  CHECK(*q.beta_final == 3.0);
  CHECK(q.schedule == Schedule::linear);
  CHECK_THROWS_AS(sa_params_from_json(Json::parse(R"({"num_reads":0})")), InvalidArgument);

  const BaselineParams b = baseline_params_from_json(Json::parse(R"({"C":5,"seed":3})"));
  CHECK(b.C == 5.0);
  CHECK(b.seed == 3);
  CHECK(b.tolerance == 1e-3);
  CHECK_THROWS_AS(baseline_params_from_json(Json::parse(R"({"C":-1})")), InvalidArgument);
  CHECK_THROWS_AS(read_json_file("/nonexistent/x.json"), IngestError);
}
