#include <c2c/metrics.hpp>

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace c2c {

namespace {

std::string num(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct NaturalLess {
  bool operator()(const std::string& a, const std::string& b) const { return natural_compare(a, b) < 0; }
};

std::map<std::string, double> shares(const std::map<std::string, int>& counts) {
  int total = 0;
  for (const auto& [k, c] : counts) total += c;
  std::map<std::string, double> out;
  for (const auto& [k, c] : counts) out[k] = total ? static_cast<double>(c) / total : 0.0;
  return out;
}

}  // namespace

int Heatmap::at(const std::string& from, const std::string& to) const {
  auto r = counts.find(from);
  if (r == counts.end()) return 0;
  auto c = r->second.find(to);
  return c == r->second.end() ? 0 : c->second;
}

int Heatmap::row_total(const std::string& from) const {
  int t = 0;
  if (auto r = counts.find(from); r != counts.end()) {
    for (const auto& [to, c] : r->second) t += c;
  }
  return t;
}

int Heatmap::column_total(const std::string& to) const {
  int t = 0;
  for (const auto& [from, row] : counts) t += at(from, to);
  return t;
}

double speedup(double baseline_hours, double measured_hours) {
  if (!(baseline_hours > 0.0) || !(measured_hours > 0.0)) {
    throw ContractViolation("speedup needs positive completion times");
  }
  return baseline_hours / measured_hours;
}

Heatmap heatmap(const TraceLog& trace) {
  Heatmap h;
  std::set<std::string, NaturalLess> agents;
  for (const auto& e : trace.events()) {
    if (e.kind == TraceKind::action) agents.insert(e.payload.at("agent").get<std::string>());
    if (e.kind != TraceKind::message_delivered) continue;
    const auto from = e.payload.at("from").get<std::string>();
    const auto to = e.payload.at("to").get<std::string>();
    agents.insert(from);
    agents.insert(to);
    ++h.counts[from][to];
  }
  h.agents.assign(agents.begin(), agents.end());
  return h;
}

Distributions distributions(const TraceLog& trace) {
  Distributions d;
  struct Sent {
    std::string type;
    std::string channel;
    int step;
  };
  std::map<std::string, Sent> roots;           // thread id -> request
  std::map<std::string, std::string> reply_thread;  // reply message id -> thread id
  std::map<std::string, int> first_answer;     // thread id -> delivery step of the first answer

  for (const auto& e : trace.events()) {
    if (e.kind == TraceKind::message_sent) {
      const auto type = e.payload.at("type").get<std::string>();
      const auto channel = e.payload.at("channel").get<std::string>();
      const auto thread = e.payload.at("thread_id").get<std::string>();
      if (type == "RESPONSE" || type == "MEETING_START") {
        reply_thread[e.payload.at("message_id").get<std::string>()] = thread;
        continue;
      }
      ++d.type_counts[type];
      ++d.channel_counts[channel];
      if (type != "PROGRESS_UPDATE") roots.emplace(thread, Sent{type, channel, e.step});
    } else if (e.kind == TraceKind::message_delivered) {
      auto it = reply_thread.find(e.payload.at("message_id").get<std::string>());
      if (it != reply_thread.end()) first_answer.emplace(it->second, e.step);
    }
  }
  d.type_shares = shares(d.type_counts);
  d.channel_shares = shares(d.channel_counts);

  std::map<std::string, std::pair<long, int>> by_type, by_channel;
  for (const auto& [thread, req] : roots) {
    auto a = first_answer.find(thread);
    if (a == first_answer.end()) continue;
    const int latency = a->second - req.step;
    by_type[req.type].first += latency;
    ++by_type[req.type].second;
    by_channel[req.channel].first += latency;
    ++by_channel[req.channel].second;
  }
  for (const auto& [k, v] : by_type) d.latency_by_type[k] = {static_cast<double>(v.first) / v.second, v.second};
  for (const auto& [k, v] : by_channel) d.latency_by_channel[k] = {static_cast<double>(v.first) / v.second, v.second};
  return d;
}

MetricsReport compute_metrics(const TraceLog& trace, const Scenario& scenario, std::optional<double> baseline_time) {
  if (trace.empty()) throw std::invalid_argument("empty trace");
  MetricsReport m;
  m.roots_total = static_cast<int>(scenario.tasks.size());

  double done_hours = 0.0;
  double done_time = 0.0;
  int last_step = 0;
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<int, double>>> af_changes;
  for (const auto& e : trace.events()) {
    last_step = std::max(last_step, e.step);
    switch (e.kind) {
      case TraceKind::task_done:
        if (e.payload.at("root").get<bool>()) {
          ++m.roots_done;
          done_hours += e.payload.at("estimated_hours").get<double>();
          done_time += e.payload.at("completion_step").get<int>() * scenario.hours_per_step;
        }
        break;
      case TraceKind::message_sent:
        m.communication_cost += e.payload.at("cost_h").get<double>();
        break;
      case TraceKind::af_update:
        af_changes[{e.payload.at("agent").get<std::string>(), e.payload.at("task").get<std::string>()}].emplace_back(
            e.step, e.payload.at("new").get<double>());
        break;
      default:
        break;
    }
  }

  m.completion_rate = m.roots_total ? 100.0 * m.roots_done / m.roots_total : 0.0;
  if (m.roots_done > 0) {
    m.avg_completion_time = done_time / m.roots_done;
    m.efficiency = done_hours / m.avg_completion_time;
    if (baseline_time) m.speedup = speedup(*baseline_time, m.avg_completion_time);
  }

  // AF held at the end of each step, per pair, from its initialization onward.
  // Counting samples per distinct value keeps a constant map at its exact value.
  std::map<double, long> samples;
  long total = 0;
  for (const auto& [pair, changes] : af_changes) {
    std::size_t i = 0;
    for (int s = changes.front().first; s <= last_step; ++s) {
      while (i + 1 < changes.size() && changes[i + 1].first <= s) ++i;
      ++samples[changes[i].second];
      ++total;
    }
  }
  for (const auto& [value, count] : samples) {
    m.alignment_score += value * (static_cast<double>(count) / static_cast<double>(total));
  }

  m.heatmap = heatmap(trace);
  m.distributions = distributions(trace);
  return m;
}

std::string config_label(const Scenario& scenario) {
  return scenario.team_label + "/" + std::string(to_string(scenario.policy));
}

std::string metrics_csv_row(const std::string& config, const std::string& complexity, const MetricsReport& m) {
  std::ostringstream os;
  os << config << ',' << complexity << ',' << num(m.completion_rate, 1) << ',' << num(m.avg_completion_time, 2) << ','
     << num(m.communication_cost, 2) << ',' << num(m.alignment_score, 3) << ',' << num(m.efficiency, 3) << ','
     << (m.speedup ? num(*m.speedup, 3) : std::string());
  return os.str();
}

std::string format_report(const std::string& config, const std::string& complexity, const MetricsReport& m) {
  std::ostringstream os;
  os << "config            " << config << "\n";
  os << "complexity        " << complexity << "\n";
  os << "completion rate   " << num(m.completion_rate, 1) << " % (" << m.roots_done << "/" << m.roots_total << ")\n";
  os << "completion time   " << num(m.avg_completion_time, 2) << " h\n";
  os << "communication     " << num(m.communication_cost, 2) << " h\n";
  os << "alignment score   " << num(m.alignment_score, 3) << "\n";
  os << "efficiency        " << num(m.efficiency, 3) << "\n";
  if (m.speedup) os << "speedup           " << num(*m.speedup, 3) << "\n";

  const auto& d = m.distributions;
  if (!d.type_counts.empty()) {
    os << "\nmessage types\n";
    for (const auto& [k, c] : d.type_counts) {
      os << "  " << k << "  " << c << "  (" << num(100.0 * d.type_shares.at(k), 1) << " %)";
      if (auto l = d.latency_by_type.find(k); l != d.latency_by_type.end()) {
        os << "  mean response " << num(l->second.mean_steps, 2) << " steps";
      }
      os << "\n";
    }
    os << "channels\n";
    for (const auto& [k, c] : d.channel_counts) {
      os << "  " << k << "  " << c << "  (" << num(100.0 * d.channel_shares.at(k), 1) << " %)";
      if (auto l = d.latency_by_channel.find(k); l != d.latency_by_channel.end()) {
        os << "  mean response " << num(l->second.mean_steps, 2) << " steps";
      }
      os << "\n";
    }
  }

  const auto& h = m.heatmap;
  if (!h.counts.empty()) {
    os << "\nmessages delivered (row = from, column = to)\n      ";
    for (const auto& to : h.agents) {
      char cell[16];
      std::snprintf(cell, sizeof cell, "%5s", to.c_str());
      os << cell;
    }
    os << "\n";
    for (const auto& from : h.agents) {
      char cell[16];
      std::snprintf(cell, sizeof cell, "%-6s", from.c_str());
      os << cell;
      for (const auto& to : h.agents) {
        std::snprintf(cell, sizeof cell, "%5d", h.at(from, to));
        os << cell;
      }
      os << "\n";
    }
  }
  return os.str();
}

std::string format_comparison(const std::string& complexity,
                              const std::vector<std::pair<std::string, MetricsReport>>& columns) {
  if (columns.empty()) return {};
  std::ostringstream os;
  auto row = [&](const std::string& label, auto&& cell) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-22s", label.c_str());
    os << buf;
    for (const auto& [name, m] : columns) {
      std::snprintf(buf, sizeof buf, "%16s", cell(m).c_str());
      os << buf;
    }
    os << "\n";
  };
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-22s", complexity.c_str());
    os << buf;
    for (const auto& [name, m] : columns) {
      std::snprintf(buf, sizeof buf, "%16s", name.c_str());
      os << buf;
    }
    os << "\n";
  }
  const auto& base = columns.front().second;
  row("completion rate (%)", [](const MetricsReport& m) { return num(m.completion_rate, 1); });
  row("completion time (h)", [](const MetricsReport& m) { return num(m.avg_completion_time, 2); });
  row("communication (h)", [](const MetricsReport& m) { return num(m.communication_cost, 2); });
  row("alignment score", [](const MetricsReport& m) { return num(m.alignment_score, 3); });
  row("efficiency", [](const MetricsReport& m) { return num(m.efficiency, 3); });
  row("speedup", [&](const MetricsReport& m) {
    if (base.roots_done == 0 || m.roots_done == 0) return std::string("n/a");
    return num(speedup(base.avg_completion_time, m.avg_completion_time), 3);
  });
  return os.str();
}

}  // namespace c2c
