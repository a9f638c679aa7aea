// Copyright 2026 The ibex authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ibex/coord/fault_plan.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ibex::coord {

const std::vector<std::string_view>& fault_phases() {
  static const std::vector<std::string_view> phases = {"production", "dag",        "assign", "execution",
                                                       "phase2",     "phase3-mid", "phase3", "commit"};
  return phases;
}

namespace {

std::uint64_t parse_number(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw FaultPlanError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

FaultTarget parse_target(std::string_view s, std::size_t line) {
  if (s == "leader") return {FaultTarget::Kind::kLeader, 0};
  if (s == "follower") return {FaultTarget::Kind::kFollower, 0};
  return {FaultTarget::Kind::kNode, parse_number(s, line)};
}

std::string target_text(const FaultTarget& t) {
  switch (t.kind) {
    case FaultTarget::Kind::kLeader: return "leader";
    case FaultTarget::Kind::kFollower: return "follower";
    case FaultTarget::Kind::kNode: break;
  }
  return std::to_string(t.node);
}

}  // namespace

FaultPlan FaultPlan::parse(std::istream& in) {
  FaultPlan plan;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream words(raw);
    std::vector<std::string> w;
    for (std::string t; words >> t;) w.push_back(t);
    if (w.empty()) continue;
    const auto fail = [&](const std::string& why) {
      throw FaultPlanError("line " + std::to_string(line) + ": " + why);
    };
    if (w.size() != 4 || w[2] != "at") fail("expected '<crash|restart> <node> at <trigger>'");
    FaultEvent ev;
    if (w[0] == "crash") {
      ev.action = FaultAction::kCrash;
    } else if (w[0] == "restart") {
      ev.action = FaultAction::kRestart;
    } else {
      fail("unknown action '" + w[0] + "'");
    }
    ev.target = parse_target(w[1], line);
    const std::string& trig = w[3];
    if (trig.starts_with('+')) {
      ev.after_ms = static_cast<SimTime>(parse_number(std::string_view(trig).substr(1), line));
    } else {
      if (ev.action == FaultAction::kRestart) fail("restart takes a +<ms> trigger");
      std::string_view phase = trig;
      if (const auto at = trig.find('@'); at != std::string::npos) {
        ev.height = parse_number(std::string_view(trig).substr(at + 1), line);
        phase = std::string_view(trig).substr(0, at);
      }
      const auto& known = fault_phases();
      if (std::find(known.begin(), known.end(), phase) == known.end()) {
        fail("unknown phase '" + std::string(phase) + "'");
      }
      ev.phase = std::string(phase);
    }
    if (ev.action == FaultAction::kRestart && ev.target.kind != FaultTarget::Kind::kNode) {
      fail("restart needs a node id");
    }
    plan.events.push_back(std::move(ev));
  }
  return plan;
}

FaultPlan FaultPlan::parse_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

FaultPlan FaultPlan::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FaultPlanError("cannot open fault plan " + path.string());
  return parse(in);
}

std::string FaultPlan::to_text() const {
  std::string out;
  for (const auto& ev : events) {
    out += ev.action == FaultAction::kCrash ? "crash " : "restart ";
    out += target_text(ev.target) + " at ";
    if (ev.phase) {
      out += *ev.phase;
      if (ev.height) out += "@" + std::to_string(*ev.height);
    } else {
      out += "+" + std::to_string(ev.after_ms);
    }
    out += '\n';
  }
  return out;
}

void FaultPlan::validate(const std::vector<NodeId>& members) const {
  for (const auto& ev : events) {
    if (ev.target.kind != FaultTarget::Kind::kNode) continue;
    if (std::find(members.begin(), members.end(), ev.target.node) == members.end()) {
      throw FaultPlanError("fault plan names unknown node " + std::to_string(ev.target.node));
    }
  }
}

FaultInjector::FaultInjector(EventLoop& loop, FaultPlan plan, const std::vector<NodeId>& members, Hooks hooks)
    : loop_(&loop), plan_(std::move(plan)), hooks_(std::move(hooks)), fired_(plan_.events.size(), false) {
  plan_.validate(members);
}

void FaultInjector::arm() {
  for (std::size_t i = 0; i < plan_.events.size(); ++i) {
    if (plan_.events[i].phase) continue;
    loop_->schedule_after(plan_.events[i].after_ms, [this, i] { fire(i); });
  }
}

void FaultInjector::on_phase(std::string_view phase, std::uint64_t height) {
  for (std::size_t i = 0; i < plan_.events.size(); ++i) {
    const auto& ev = plan_.events[i];
    if (fired_[i] || !ev.phase || *ev.phase != phase) continue;
    if (ev.height && *ev.height != height) continue;
    fire(i);
  }
}

void FaultInjector::fire(std::size_t i) {
  if (fired_[i]) return;
  fired_[i] = true;
  ++fired_count_;
  const auto& ev = plan_.events[i];
  std::optional<NodeId> node;
  switch (ev.target.kind) {
    case FaultTarget::Kind::kNode: node = ev.target.node; break;
    case FaultTarget::Kind::kLeader: node = hooks_.leader ? hooks_.leader() : std::nullopt; break;
    case FaultTarget::Kind::kFollower: {
      const auto live = hooks_.live_followers ? hooks_.live_followers() : std::vector<NodeId>{};
      if (!live.empty()) node = *std::min_element(live.begin(), live.end());
      break;
    }
  }
  const std::string what = ev.action == FaultAction::kCrash ? "crash" : "restart";
  if (!node) {
    log_.push_back("t=" + std::to_string(loop_->now()) + " " + what + " " + target_text(ev.target) + " skipped");
    return;
  }
  log_.push_back("t=" + std::to_string(loop_->now()) + " " + what + " " + std::to_string(*node));
  if (ev.action == FaultAction::kCrash) {
    if (hooks_.crash) hooks_.crash(*node);
  } else if (hooks_.restart) {
    hooks_.restart(*node);
  }
}

}  // namespace ibex::coord
