#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <sstream>

#include "arena/curriculum.hpp"
#include "arena/embedding.hpp"
#include "arena/pca.hpp"
#include "arena/rng.hpp"
#include "arena/task.hpp"

namespace arena {
namespace {

TEST(Predicate, RenderParseRoundTrip) {
  const Predicate p = make_predicate(PredicateKind::AttainSkill, {static_cast<int>(Skill::Melee), 10});
  EXPECT_EQ(render(p), "AttainSkill(skill=Melee, level=10)");
  EXPECT_EQ(parse_predicate(render(p)), p);
  EXPECT_EQ(parse_predicate("AttainSkill( level = 10 ,skill=Melee )"), p);
  const Predicate c = parse_predicate("CountEvent(event=ConsumeItem, n=5)");
  EXPECT_EQ(c.kind, PredicateKind::CountEvent);
  EXPECT_EQ(c.args, (std::vector<std::int64_t>{static_cast<int>(EventKind::ConsumeItem), 5}));
}

TEST(Predicate, RejectsMalformed) {
  EXPECT_THROW(parse_predicate("Teleport(n=1)"), ConfigError);
  EXPECT_THROW(parse_predicate("TickGE(target=0)"), ConfigError);
  EXPECT_THROW(parse_predicate("TickGE(target=5, target=6)"), ConfigError);
  EXPECT_THROW(parse_predicate("TickGE(turns=5)"), ConfigError);
  EXPECT_THROW(parse_predicate("AttainSkill(skill=Melee)"), ConfigError);
  EXPECT_THROW(parse_predicate("AttainSkill(skill=Melee, level=11)"), ConfigError);
  EXPECT_THROW(parse_predicate("EquipItem(item=Sword, tier=1)"), ConfigError);
  EXPECT_THROW(parse_predicate("TickGE(target=abc)"), ConfigError);
  EXPECT_THROW(make_predicate(PredicateKind::DefeatEntity, {}), ConfigError);
}

TEST(Predicate, CanonicalArgsKeySorted) {
  const Predicate p = parse_predicate("OwnItem(n=2, tier=3, item=Weapon)");
  EXPECT_EQ(canonical_args_key(p), "item=Weapon,n=2,tier=3");
}

TEST(Progress, ReferencePoints) {
  AgentEpisodeState s(8);
  AgentState a;
  a.lifespan = 512;
  a.skills.xp[static_cast<int>(Skill::Magic)] = xp_for_level(3);
  s.observe(a);
  EXPECT_EQ(evaluate_progress(parse_predicate("TickGE(target=1024)"), s), 0.5);
  EXPECT_EQ(evaluate_progress(parse_predicate("AttainSkill(skill=Magic, level=10)"), s), 0.3);
  EXPECT_EQ(evaluate_progress(parse_predicate("AttainSkill(skill=Magic, level=3)"), s), 1.0);
}

TEST(Progress, IndicatorsAndCounters) {
  AgentEpisodeState s(8);
  AgentState a;
  a.pos = {3, 4};
  a.gold = 25;
  a.gold_earned = 5;
  a.inventory = {{ItemKind::Weapon, CombatStyle::Melee, 2, 1, true}, {ItemKind::Ration, std::nullopt, 1, 4, false}};
  s.observe(a);
  s.record_event({0, 0, EventKind::PlayerKill, 1});
  s.record_event({0, 0, EventKind::HarvestItem, static_cast<int>(ItemKind::Ration)});
  EXPECT_EQ(evaluate_progress(parse_predicate("OccupyTile(row=3, col=4)"), s), 1.0);
  EXPECT_EQ(evaluate_progress(parse_predicate("OccupyTile(row=4, col=3)"), s), 0.0);
  EXPECT_EQ(evaluate_progress(parse_predicate("EquipItem(item=Weapon, tier=2)"), s), 1.0);
  EXPECT_EQ(evaluate_progress(parse_predicate("EquipItem(item=Weapon, tier=3)"), s), 0.0);
  EXPECT_EQ(evaluate_progress(parse_predicate("OwnItem(item=Ration, tier=1, n=8)"), s), 0.5);
  EXPECT_EQ(evaluate_progress(parse_predicate("OwnItem(item=Weapon, tier=3, n=1)"), s), 0.0);
  EXPECT_EQ(evaluate_progress(parse_predicate("HoardGold(amount=50)"), s), 0.5);
  EXPECT_EQ(evaluate_progress(parse_predicate("EarnGold(amount=20)"), s), 0.25);
  EXPECT_EQ(evaluate_progress(parse_predicate("DefeatEntity(n=4)"), s), 0.25);
  EXPECT_EQ(evaluate_progress(parse_predicate("HarvestItem(item=Ration, n=2)"), s), 0.5);
  EXPECT_EQ(evaluate_progress(parse_predicate("CountEvent(event=PlayerKill, n=1)"), s), 1.0);
}

TEST(Progress, HighWaterMarkSurvivesLosses) {
  AgentEpisodeState s(8);
  AgentState a;
  a.gold = 40;
  s.observe(a);
  a.gold = 0;
  s.observe(a);
  EXPECT_EQ(evaluate_progress(parse_predicate("HoardGold(amount=40)"), s), 1.0);
  TaskAssignment t{0, TaskSpec::make("g", parse_predicate("HoardGold(amount=80)")), 0.0, false};
  t.update(s);
  EXPECT_EQ(t.progress, 0.5);
  EXPECT_FALSE(t.completed);
}

TEST(Curriculum, ParsesFileFormat) {
  const Curriculum c = parse_task_file(
      "# header\n"
      "\n"
      "a: TickGE(target=10) weight=3\n"
      "b: DefeatEntity(n=1)   # trailing comment\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].sampling_weight, 3.0);
  EXPECT_DOUBLE_EQ(c.probabilities()[0], 0.75);
  EXPECT_EQ(c.find("b"), 1u);
  EXPECT_EQ(c.find("zz"), 2u);
  EXPECT_EQ(parse_task_file(render_task_file(c)).tasks(), c.tasks());
}

TEST(Curriculum, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_task_file(text);
    } catch (const TaskFileError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("a: TickGE(target=1)\nb TickGE(target=1)\n"), 2u);
  EXPECT_EQ(line_of("a: TickGE(target=1)\na: TickGE(target=2)\n"), 2u);
  EXPECT_EQ(line_of("\n\na: TickGE(target=1) weight=0\n"), 3u);
  EXPECT_EQ(line_of("a: TickGE(target=1) weight=x\n"), 1u);
  EXPECT_EQ(line_of("a: Nope(n=1)\n"), 1u);
  EXPECT_EQ(line_of("a: TickGE(target=1) extra\n"), 1u);
}

TEST(Curriculum, SamplingFollowsWeights) {
  const Curriculum c = parse_task_file("a: TickGE(target=1) weight=9\nb: TickGE(target=2)\n");
  const auto assigned = sample_assignments(c, 5000, 1);
  const auto n_a = std::count_if(assigned.begin(), assigned.end(), [](const auto& t) { return t.task.name == "a"; });
  EXPECT_NEAR(static_cast<double>(n_a) / 5000.0, 0.9, 0.02);
  EXPECT_EQ(assigned[17].agent_id, 17);
  EXPECT_EQ(sample_assignments(c, 50, 3).size(), 50u);
  EXPECT_THROW(sample_assignments(Curriculum{}, 3, 1), ConfigError);
}

TEST(Overlap, MicroCorpora) {
  const Curriculum train = parse_task_file(
      "t1: TickGE(target=10)\n"
      "t2: DefeatEntity(n=1)\n"
      "t3: AttainSkill(skill=Melee, level=3)\n");
  // same predicates, one identical argument list
  const Curriculum e1 = parse_task_file(
      "e1: TickGE(target=10)\n"
      "e2: DefeatEntity(n=5)\n");
  EXPECT_EQ(overlap(train, e1, OverlapMode::Predicates), 1.0);
  EXPECT_EQ(overlap(train, e1, OverlapMode::Full), 0.5);
  // one of four predicates known, none fully
  const Curriculum e2 = parse_task_file(
      "e1: HoardGold(amount=5)\n"
      "e2: EarnGold(amount=5)\n"
      "e3: OccupyTile(row=1, col=1)\n"
      "e4: AttainSkill(skill=Magic, level=3)\n");
  EXPECT_EQ(overlap(train, e2, OverlapMode::Predicates), 0.25);
  EXPECT_EQ(overlap(train, e2, OverlapMode::Full), 0.0);
  // duplicate eval keys count once; argument order does not matter
  const Curriculum e3 = parse_task_file(
      "e1: AttainSkill(level=3, skill=Melee)\n"
      "e2: AttainSkill(skill=Melee, level=3)\n"
      "e3: TickGE(target=11)\n");
  EXPECT_EQ(overlap(train, e3, OverlapMode::Predicates), 1.0);
  EXPECT_EQ(overlap(train, e3, OverlapMode::Full), 0.5);
  EXPECT_THROW(overlap(train, Curriculum{}, OverlapMode::Full), ConfigError);
}

TEST(Embedding, TokensAndNorm) {
  EXPECT_EQ(task_tokens("AttainSkill(skill=Melee, level = 3)"),
            (std::vector<std::string>{"AttainSkill", "skill=Melee", "level=3"}));
  EXPECT_EQ(task_tokens("Bare"), (std::vector<std::string>{"Bare"}));
  const auto v = embed_task("TickGE(target=5)", 32);
  EXPECT_EQ(v.size(), 32u);
  EXPECT_NEAR(l2_norm(v), 1.0, 1e-12);
  EXPECT_EQ(v, embed_task("TickGE(target=5)", 32));
  EXPECT_THROW(embed_task("", 32), ConfigError);
  EXPECT_THROW(embed_task("TickGE(target=5)", 0), ConfigError);
}

TEST(Embedding, SamePredicateIsCloser) {
  const auto a = embed_task("DefeatEntity(n=1)");
  const auto b = embed_task("DefeatEntity(n=7)");
  const auto c = embed_task("HoardGold(amount=7)");
  EXPECT_GT(cosine_similarity(a, b), cosine_similarity(a, c));
  EXPECT_GT(cosine_similarity(a, b), 0.8);
}

std::vector<std::vector<double>> random_rows(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng r(seed);
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& row : rows) {
    for (std::size_t j = 0; j < d; ++j) row[j] = r.uniform() * (1.0 + static_cast<double>(j));
  }
  return rows;
}

TEST(Pca, MatchesDenseEigensolver) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t d = 2 + seed % 7;
    const auto rows = random_rows(30, d, seed);
    const PcaResult p = pca_project(rows, {.k = 2, .tolerance = 1e-13, .max_iterations = 200000});

    const auto cov = covariance(rows);
    Eigen::MatrixXd m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov[i][j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    for (std::size_t c = 0; c < 2; ++c) {
      const auto col = static_cast<Eigen::Index>(d - 1 - c);
      EXPECT_NEAR(p.explained_variance[c], es.eigenvalues()(col), 1e-6);
      double dotp = 0.0;
      for (std::size_t i = 0; i < d; ++i) dotp += p.components[c][i] * es.eigenvectors()(static_cast<Eigen::Index>(i), col);
      EXPECT_NEAR(std::abs(dotp), 1.0, 1e-6) << "seed " << seed << " component " << c;
    }
  }
}

TEST(Pca, OrthonormalAndProjection) {
  const auto rows = random_rows(12, 6, 42);
  const PcaResult p = pca_project(rows, {.k = 3});
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      EXPECT_NEAR(dot(p.components[a], p.components[b]), a == b ? 1.0 : 0.0, 1e-9);
    }
  }
  EXPECT_GE(p.explained_variance[0], p.explained_variance[1]);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double x = 0.0;
    for (std::size_t j = 0; j < 6; ++j) x += (rows[i][j] - p.mean[j]) * p.components[0][j];
    EXPECT_NEAR(p.projected[i][0], x, 1e-12);
  }
}

TEST(Pca, DegenerateInputCompletesBasis) {
  // all rows on one line: second component has zero variance
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 5; ++i) rows.push_back({1.0 * i, 2.0 * i, 0.0});
  const PcaResult p = pca_project(rows);
  EXPECT_NEAR(p.explained_variance[1], 0.0, 1e-12);
  EXPECT_NEAR(dot(p.components[0], p.components[1]), 0.0, 1e-9);
  EXPECT_NEAR(l2_norm(p.components[1]), 1.0, 1e-9);
}

TEST(Pca, Errors) {
  EXPECT_THROW(pca_project({{1.0, 2.0}, {3.0, 4.0}}), ConfigError);
  EXPECT_THROW(pca_project({{1.0}, {2.0}, {3.0}}), ConfigError);
  EXPECT_THROW(pca_project({{1.0, 2.0}, {3.0}, {4.0, 5.0}}), ConfigError);
}

TEST(Pca, CsvHeader) {
  std::ostringstream out;
  write_pca_csv(out, {{"a", "TickGE", 0.5, -1.0}});
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "task_name,predicate,x,y");
}

}  // namespace
}  // namespace arena
