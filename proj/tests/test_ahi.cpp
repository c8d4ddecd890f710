#include <doctest.h>

#include "delaudit/ahi.hpp"

using namespace delaudit;

namespace {

Op ins(const Bytes& id) { return Op{kOpInsert, id, {}}; }
Op del(const Bytes& id) { return Op{kOpDelete, id, {}}; }

}  // namespace

TEST_CASE("sorted dict always matches under identical randomness") {
  auto impl = sorted_list_dict_spec();
  OpSeq script = {ins("b"), ins("a"), del("b"), Op{kOpSet, "c", "7"}};
  auto adversary = shuffling_adversary(impl.adt, script, 3);
  RandomTape t(0, 0);
  auto rec = run_ahi_game(impl, adversary, AhiVariant::kIdentical, t, t);
  CHECK(rec.s_p == rec.s_p_star);
  CHECK_FALSE(rec.forced);
}

TEST_CASE("forcing rule fires exactly when the claimed equivalence fails") {
  auto impl = sorted_list_dict_spec();
  // sigma* not equivalent to sigma: the game forces s_P* <- s_P.
  auto bad = scripted_adversary({ins("a")}, {ins("b")});
  RandomTape t(0, 0);
  auto rec = run_ahi_game(impl, bad, AhiVariant::kIdentical, t, t);
  CHECK(rec.forced);
  CHECK(rec.s_p == rec.s_p_star);

  auto verbatim = scripted_adversary({ins("a")}, {ins("a")});
  auto rec2 = run_ahi_game(impl, verbatim, AhiVariant::kIdentical, t, t);
  CHECK_FALSE(rec2.forced);
  CHECK(rec2.s_p == rec2.s_p_star);
}

TEST_CASE("echo adversary separates the leaky implementation") {
  auto impl = leaky_dict_spec(8);
  RandomTape real(17, 8);
  RandomTape fresh(18, 8);
  auto rec = run_ahi_game(impl, echo_adversary(), AhiVariant::kFresh, real, fresh);
  // The realized run logged the op sequence; the fresh replay almost surely
  // missed the echo and kept only its own leak.
  CHECK_FALSE(rec.forced);
  CHECK(rec.s_p != rec.s_p_star);
}

TEST_CASE("sorted dict passes the exact audit at (0,0) for all fixture adversaries") {
  auto impl = sorted_list_dict_spec();
  AhiAuditOptions opt;
  opt.variant = AhiVariant::kIdentical;
  std::vector<AhiAdversaryFactory> adversaries = {
      scripted_adversary({ins("a"), ins("b"), del("a")}, {ins("b")}),
      random_dict_adversary(impl.adt, 5, 12),
      shuffling_adversary(impl.adt, {ins("x"), ins("y"), del("x"), ins("z")}, 7),
      echo_adversary(),
  };
  for (auto& adv : adversaries) {
    auto report = audit_ahi(impl, adv, 0.0, 0.0, opt);
    CHECK(report.passed);
  }
  // Fresh randomness changes nothing for a zero-tape implementation.
  opt.variant = AhiVariant::kFresh;
  CHECK(audit_ahi(impl, random_dict_adversary(impl.adt, 9, 10), 0.0, 0.0, opt).passed);
}

TEST_CASE("leaky implementation fails the exact audit under the echo adversary") {
  // Identical-randomness variant at a small leak: the view pins the leak,
  // and the replayed log differs from the realized one with certainty.
  auto impl = leaky_dict_spec(8);
  AhiAuditOptions opt;
  opt.variant = AhiVariant::kIdentical;
  auto report = audit_ahi(impl, echo_adversary(), 5.0, 0.9, opt);
  CHECK_FALSE(report.passed);
  CHECK(report.delta_forward == 1.0);

  // Fresh variant, exact at 8+8 bits: still far past (5, 0.9).
  opt.variant = AhiVariant::kFresh;
  auto fresh_report = audit_ahi(impl, echo_adversary(), 5.0, 0.9, opt);
  CHECK_FALSE(fresh_report.passed);
  CHECK(fresh_report.delta_forward > 0.99);
}

TEST_CASE("constant-state implementation passes at (0,0) trivially") {
  // Ignores all operations: the two joints coincide.
  struct InertImpl : ImplInstance {
    Bytes step(const Op&, RandomTape&) override { return bot_output(); }
    Bytes physical_state() const override { return "inert"; }
  };
  static const DictionaryAdt adt;
  ImplSpec impl{"inert", [] { return std::make_unique<InertImpl>(); }, TapeLayout::empty(),
                &adt};
  AhiAuditOptions opt;
  for (auto variant : {AhiVariant::kIdentical, AhiVariant::kFresh}) {
    opt.variant = variant;
    CHECK(audit_ahi(impl, random_dict_adversary(&adt, 2, 8), 0.0, 0.0, opt).passed);
  }
}

TEST_CASE("sampled audit mode reproduces the exact verdicts") {
  auto impl = leaky_dict_spec(12);
  AhiAuditOptions opt;
  opt.exact = false;
  opt.variant = AhiVariant::kFresh;
  opt.trials = 4000;
  opt.seed = 21;
  auto report = audit_ahi(impl, echo_adversary(), 5.0, 0.9, opt);
  CHECK(report.method == "sampled");
  CHECK_FALSE(report.passed);

  auto good = sorted_list_dict_spec();
  auto ok = audit_ahi(good, random_dict_adversary(good.adt, 3, 10), 0.0, 0.05, opt);
  CHECK(ok.passed);
}

TEST_CASE("game records serialize") {
  auto impl = sorted_list_dict_spec();
  RandomTape t(0, 0);
  auto rec = run_ahi_game(impl, scripted_adversary({ins("a")}, {ins("a")}),
                          AhiVariant::kIdentical, t, t);
  auto j = rec.to_json();
  CHECK(j.find("seq_star") != std::string::npos);
  CHECK(j.find("identical") != std::string::npos);
}
