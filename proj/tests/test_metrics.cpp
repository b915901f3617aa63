#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <sstream>

using namespace c2c;
using namespace c2c::testing;
using nlohmann::ordered_json;

namespace {

void sent(TraceLog& t, int step, const std::string& id, const std::string& thread, const std::string& from,
          const std::string& to, const std::string& type, const std::string& channel, double cost = 0.05) {
  t.append(step, TraceKind::message_sent,
           {{"message_id", id}, {"thread_id", thread}, {"from", from}, {"to", ordered_json::array({to})},
            {"channel", channel}, {"type", type}, {"sent_step", step}, {"delivery_step", step + 1},
            {"cost_h", cost}});
}

void delivered(TraceLog& t, int step, const std::string& id, const std::string& from, const std::string& to,
               const std::string& type) {
  t.append(step, TraceKind::message_delivered,
           {{"message_id", id}, {"from", from}, {"to", to}, {"type", type}, {"sent_step", step - 1}});
}

void root_done(TraceLog& t, int completion_step, double hours) {
  t.append(completion_step - 1, TraceKind::task_done,
           {{"task", "T1"}, {"root", true}, {"completion_step", completion_step}, {"estimated_hours", hours}});
}

}  // namespace

TEST_CASE("speedup is baseline over measured") {
  CHECK(speedup(20.0, 13.0) == doctest::Approx(1.538).epsilon(1e-3));
  CHECK(speedup(20.0, 20.0) == 1.0);
  CHECK_THROWS_AS((void)speedup(0.0, 13.0), ContractViolation);
  CHECK_THROWS_AS((void)speedup(20.0, -1.0), ContractViolation);
}

TEST_CASE("completion metrics come from task_done events") {
  const auto s = make_scenario("medium");
  TraceLog t;
  t.append(0, TraceKind::af_update, {{"agent", "W1"}, {"task", "T1.1"}, {"new", 0.30}});
  root_done(t, 80, 24.0);
  const auto m = compute_metrics(t, s, 26.0);
  CHECK(m.roots_done == 1);
  CHECK(m.completion_rate == 100.0);
  CHECK(m.avg_completion_time == 20.0);
  CHECK(m.efficiency == doctest::Approx(1.20));
  REQUIRE(m.speedup);
  CHECK(*m.speedup == doctest::Approx(1.3));

  TraceLog none;
  none.append(0, TraceKind::action, {{"agent", "M1"}});
  const auto z = compute_metrics(none, s, 26.0);
  CHECK(z.completion_rate == 0.0);
  CHECK(z.efficiency == 0.0);
  CHECK_FALSE(z.speedup);
}

TEST_CASE("an empty trace is rejected") {
  CHECK_THROWS_WITH_AS(compute_metrics(TraceLog{}, make_scenario("simple")), "empty trace", std::invalid_argument);
}

TEST_CASE("alignment is averaged over agent, task and step") {
  const auto s = make_scenario("simple");
  TraceLog t;
  t.append(0, TraceKind::af_update, {{"agent", "W1"}, {"task", "T1.1"}, {"new", 0.30}});
  t.append(0, TraceKind::af_update, {{"agent", "W2"}, {"task", "T1.2"}, {"new", 0.30}});
  t.append(2, TraceKind::af_update, {{"agent", "W1"}, {"task", "T1.1"}, {"new", 0.50}});
  t.append(3, TraceKind::action, {{"agent", "W1"}});
  // W1: 0.3, 0.3, 0.5, 0.5; W2: 0.3 x4
  CHECK(compute_metrics(t, s).alignment_score == doctest::Approx(0.35));
}

TEST_CASE("without communication alignment stays at its initial value") {
  NoCommPolicy p;
  for (const auto* c : {"simple", "medium", "complex"}) {
    const auto s = make_scenario(c);
    const auto r = simulate_policy(s, p);
    CHECK(compute_metrics(r.world.trace, s).alignment_score == 0.30);
  }
}

TEST_CASE("communication cost sums every sent message") {
  HeuristicPolicy p;
  const auto s = make_scenario("medium", "1M+4W", PolicyKind::c2c_heuristic);
  const auto r = simulate_policy(s, p);
  CHECK(compute_metrics(r.world.trace, s).communication_cost == doctest::Approx(r.world.communication_hours));
}

TEST_CASE("heatmap counts deliveries per sender and recipient") {
  HeuristicPolicy p;
  const auto s = make_scenario("complex", "1M+4W", PolicyKind::c2c_heuristic);
  const auto r = simulate_policy(s, p);
  const auto h = heatmap(r.world.trace);
  CHECK(h.agents == std::vector<std::string>{"M1", "W1", "W2", "W3", "W4"});

  std::map<std::pair<std::string, std::string>, int> raw;
  int total = 0;
  for (const auto& e : r.world.trace.events()) {
    if (e.kind != TraceKind::message_delivered) continue;
    ++raw[{e.payload["from"], e.payload["to"]}];
    ++total;
  }
  int sum_rows = 0;
  int sum_cols = 0;
  for (const auto& a : h.agents) {
    for (const auto& b : h.agents) CHECK(h.at(a, b) == raw[{a, b}]);
    CHECK(h.at(a, a) == 0);
    sum_rows += h.row_total(a);
    sum_cols += h.column_total(a);
  }
  CHECK(total > 0);
  CHECK(sum_rows == total);
  CHECK(sum_cols == total);
  CHECK(h.at("nobody", "W1") == 0);
}

TEST_CASE("distributions count request types and measure reply latency") {
  TraceLog t;
  sent(t, 1, "m1", "th1", "W1", "W2", "HELP_REQUEST", "chat");
  sent(t, 1, "m2", "th2", "W2", "M1", "HELP_REQUEST", "email");
  sent(t, 2, "m3", "th3", "W3", "M1", "NEED_CLARIFICATION", "chat");
  delivered(t, 2, "m1", "W1", "W2", "HELP_REQUEST");
  delivered(t, 2, "m2", "W2", "M1", "HELP_REQUEST");
  sent(t, 3, "m4", "th1", "W2", "W1", "RESPONSE", "chat");
  delivered(t, 3, "m3", "W3", "M1", "NEED_CLARIFICATION");
  delivered(t, 4, "m4", "W2", "W1", "RESPONSE");
  sent(t, 5, "m5", "th5", "W4", "M1", "PROGRESS_UPDATE", "chat");

  const auto d = distributions(t);
  CHECK(d.type_counts.at("HELP_REQUEST") == 2);
  CHECK(d.type_counts.at("NEED_CLARIFICATION") == 1);
  CHECK(d.type_counts.at("PROGRESS_UPDATE") == 1);
  CHECK(d.type_counts.count("RESPONSE") == 0);
  CHECK(d.type_shares.at("HELP_REQUEST") == doctest::Approx(0.5));
  CHECK(d.channel_counts.at("chat") == 3);
  CHECK(d.channel_counts.at("email") == 1);
  CHECK(d.channel_shares.at("email") == doctest::Approx(0.25));

  // only th1 was answered: sent at 1, reply delivered at 4
  REQUIRE(d.latency_by_type.count("HELP_REQUEST") == 1);
  CHECK(d.latency_by_type.at("HELP_REQUEST").mean_steps == 3.0);
  CHECK(d.latency_by_type.at("HELP_REQUEST").samples == 1);
  CHECK(d.latency_by_type.count("NEED_CLARIFICATION") == 0);
  CHECK(d.latency_by_type.count("PROGRESS_UPDATE") == 0);
  CHECK(d.latency_by_channel.at("chat").mean_steps == 3.0);
  CHECK(d.latency_by_channel.count("email") == 0);
}

TEST_CASE("two requests in one type split shares by count") {
  TraceLog t;
  sent(t, 1, "m1", "th1", "W1", "W2", "HELP_REQUEST", "chat");
  sent(t, 1, "m2", "th2", "W2", "W1", "HELP_REQUEST", "chat");
  sent(t, 1, "m3", "th3", "W3", "M1", "NEED_CLARIFICATION", "email");
  const auto d = distributions(t);
  CHECK(d.type_shares.at("HELP_REQUEST") == doctest::Approx(2.0 / 3.0));
  CHECK(d.type_shares.at("NEED_CLARIFICATION") == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("metrics survive a JSONL round trip") {
  FixedStepsPolicy p;
  const auto s = make_scenario("complex", "1M+4W", PolicyKind::fixed_steps);
  const auto r = simulate_policy(s, p);
  std::istringstream in(r.world.trace.to_jsonl());
  const auto back = TraceLog::read_jsonl(in);
  CHECK(back.to_jsonl() == r.world.trace.to_jsonl());
  const auto a = compute_metrics(r.world.trace, s, 33.75);
  const auto b = compute_metrics(back, s, 33.75);
  CHECK(metrics_csv_row("x", "complex", a) == metrics_csv_row("x", "complex", b));
  CHECK(format_report("x", "complex", a) == format_report("x", "complex", b));
}

TEST_CASE("report formats") {
  const auto s = make_scenario("medium");
  CHECK(config_label(s) == "1M+4W/no_comm");
  MetricsReport m;
  m.roots_total = 1;
  m.roots_done = 1;
  m.completion_rate = 100.0;
  m.avg_completion_time = 20.0;
  m.communication_cost = 2.5;
  m.alignment_score = 0.3;
  m.efficiency = 1.2;
  CHECK(metrics_csv_row("1M+4W/no_comm", "medium", m) == "1M+4W/no_comm,medium,100.0,20.00,2.50,0.300,1.200,");
  m.speedup = 1.5;
  CHECK(metrics_csv_row("c", "medium", m).ends_with(",1.500"));
  const auto grid = format_comparison("medium", {{"no_comm", m}, {"c2c_heuristic", m}});
  CHECK(grid.find("no_comm") != std::string::npos);
  CHECK(grid.find("c2c_heuristic") != std::string::npos);
}
