#include "envnav/tickets.hpp"

#include <algorithm>
#include <set>

#include "json_io.hpp"

namespace envnav::tickets {

using io::json;

std::string_view to_string(TicketStatus s) { return s == TicketStatus::Open ? "open" : "resolved"; }

std::string ticket_id(const std::string& rule, Timestamp start) { return rule + "@" + start.iso(); }

std::vector<ViolationInterval> extract_violations(const eval::VirtualSensor& vs, const TicketConfig& cfg) {
  std::vector<ViolationInterval> out;
  const auto v = vs.series.logic();
  const TimeGrid& g = vs.series.grid();
  std::size_t k = 0;
  while (k < v.size()) {
    if (v[k] != LogicSample::False) {
      ++k;
      continue;
    }
    std::size_t first = k;
    while (k < v.size() && v[k] == LogicSample::False) ++k;
    ViolationInterval iv{vs.name, g.at(first), g.at(k), k - first, first};
    if (iv.duration() >= cfg.min_duration) out.push_back(std::move(iv));
  }
  return out;
}

std::vector<Ticket> open_tickets(const std::vector<ViolationInterval>& intervals, const lang::RuleDef& rule,
                                 eval::EvalContext& ctx, const TicketConfig& cfg, Timestamp run_time) {
  std::vector<Ticket> out;
  const TimeGrid& g = ctx.grid();
  for (const auto& iv : intervals) {
    Ticket t{ticket_id(rule.name, iv.start), rule.name, iv, TicketStatus::Open, rule.context, {}, run_time};
    std::size_t lo = iv.first >= cfg.excerpt_padding ? iv.first - cfg.excerpt_padding : 0;
    std::size_t hi = std::min(g.count, iv.first + iv.samples + cfg.excerpt_padding);
    TimeGrid sub{g.at(lo), g.step, hi - lo};
    for (const auto& name : rule.context) {
      const TimeSeries* sp = nullptr;
      try {
        sp = &ctx.series(name);
      } catch (const eval::MissingDataError&) {
        continue;
      }
      const TimeSeries& s = *sp;
      auto off = static_cast<std::ptrdiff_t>(lo);
      auto end = static_cast<std::ptrdiff_t>(hi);
      if (s.kind() == SeriesKind::Numeric) {
        t.excerpt.emplace(name, TimeSeries::numeric(sub, {s.numeric().begin() + off, s.numeric().begin() + end}));
      } else {
        t.excerpt.emplace(name, TimeSeries::logic(sub, {s.logic().begin() + off, s.logic().begin() + end}));
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

bool conforming(const Ticket& t, const RuleSeries& scope) {
  auto it = scope.find(t.rule);
  if (it == scope.end()) return false;
  const TimeGrid& g = it->second.grid();
  auto first = g.index_of(t.interval.start);
  if (!first || t.interval.end > g.end()) return false;
  auto v = it->second.logic();
  for (std::size_t k = *first; k < g.count && g.at(k) < t.interval.end; ++k) {
    if (v[k] == LogicSample::False) return false;
  }
  return true;
}

}  // namespace

std::vector<Ticket> merge_tickets(const std::vector<Ticket>& previous, const std::vector<Ticket>& current,
                                  const RuleSeries* scope) {
  std::map<std::string, const Ticket*> now;
  for (const auto& t : current) now.emplace(t.id, &t);
  std::vector<Ticket> out;
  std::set<std::string> seen;
  for (const auto& p : previous) {
    seen.insert(p.id);
    if (auto it = now.find(p.id); it != now.end()) {
      Ticket t = *it->second;
      t.created_at = p.created_at;
      t.status = TicketStatus::Open;
      out.push_back(std::move(t));
      continue;
    }
    Ticket t = p;
    if (t.status == TicketStatus::Open && (!scope || conforming(t, *scope))) t.status = TicketStatus::Resolved;
    out.push_back(std::move(t));
  }
  for (const auto& c : current) {
    if (seen.insert(c.id).second) out.push_back(c);
  }
  return out;
}

std::string tickets_to_json(const std::vector<Ticket>& tickets) {
  json arr = json::array();
  for (const auto& t : tickets) {
    json excerpt = json::object();
    for (const auto& [name, s] : t.excerpt) excerpt[name] = io::series_json(s);
    arr.push_back({{"id", t.id},
                   {"rule", t.rule},
                   {"status", std::string(to_string(t.status))},
                   {"start", t.interval.start.iso()},
                   {"end", t.interval.end.iso()},
                   {"samples", t.interval.samples},
                   {"first", t.interval.first},
                   {"sensors", t.sensors},
                   {"excerpt", std::move(excerpt)},
                   {"created_at", t.created_at.iso()}});
  }
  return arr.dump(2) + "\n";
}

std::vector<Ticket> tickets_from_json(const std::string& text) {
  std::vector<Ticket> out;
  try {
    for (const auto& j : json::parse(text)) {
      Ticket t;
      t.id = j.at("id").get<std::string>();
      t.rule = j.at("rule").get<std::string>();
      auto status = j.at("status").get<std::string>();
      if (status != "open" && status != "resolved") throw Error("bad ticket status '" + status + "'");
      t.status = status == "open" ? TicketStatus::Open : TicketStatus::Resolved;
      t.interval = ViolationInterval{t.rule, io::timestamp_from_json(j.at("start")),
                                     io::timestamp_from_json(j.at("end")), j.at("samples").get<std::size_t>(),
                                     j.at("first").get<std::size_t>()};
      t.sensors = j.at("sensors").get<std::vector<std::string>>();
      for (const auto& [name, s] : j.at("excerpt").items()) t.excerpt.emplace(name, io::series_from_json(s));
      t.created_at = io::timestamp_from_json(j.at("created_at"));
      out.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed ticket file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("malformed ticket file: ") + e.what());
  }
  return out;
}

}  // namespace envnav::tickets
