#include "actr/algorithms.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace actr {

bool AlgorithmSpec::needs_features() const {
  for (const auto& [c, w] : parts)
    if (c.kind == ComponentKind::kPartialMatching) return true;
  return false;
}

bool AlgorithmSpec::needs_durations() const {
  for (const auto& [c, w] : parts)
    if (c.kind == ComponentKind::kValuation && c.reward_mode != RewardMode::kMostPopular)
      return true;
  return false;
}

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw DataError("bad algorithm spec '" + std::string(text) + "': " + why);
  }

  void skip_ws() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string_view ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected a name at position " + std::to_string(pos));
    return text.substr(start, pos - start);
  }

  double number() {
    skip_ws();
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc{}) fail("expected a number at position " + std::to_string(pos));
    pos = static_cast<std::size_t>(ptr - text.data());
    return value;
  }

  ComponentSpec component() {
    auto name = ident();
    ComponentSpec spec;
    if (name == "base_level") {
      spec.kind = ComponentKind::kBaseLevel;
    } else if (name == "spreading") {
      spec.kind = ComponentKind::kSpreading;
    } else if (name == "partial_matching") {
      spec.kind = ComponentKind::kPartialMatching;
    } else if (name == "valuation") {
      spec.kind = ComponentKind::kValuation;
    } else if (name == "noise") {
      spec.kind = ComponentKind::kNoise;
    } else if (name == "trans_prob") {
      spec.kind = ComponentKind::kTransProb;
    } else if (name == "most_recent") {
      spec.kind = ComponentKind::kMostRecent;
    } else {
      fail("unknown component '" + std::string(name) + "'");
    }
    if (eat('(')) {
      do {
        auto key = ident();
        if (!eat('=')) fail("expected '=' after '" + std::string(key) + "'");
        if (key == "d") {
          spec.decay = number();
        } else if (key == "alpha") {
          spec.alpha = number();
        } else if (key == "min_gap_hours") {
          spec.min_gap_hours = number();
        } else if (key == "mode") {
          auto mode = ident();
          if (mode == "ratio")
            spec.reward_mode = RewardMode::kRatio;
          else if (mode == "discrete")
            spec.reward_mode = RewardMode::kDiscrete;
          else if (mode == "mp" || mode == "most_popular")
            spec.reward_mode = RewardMode::kMostPopular;
          else
            fail("unknown reward mode '" + std::string(mode) + "'");
        } else {
          fail("unknown parameter '" + std::string(key) + "'");
        }
      } while (eat(','));
      if (!eat(')')) fail("expected ')'");
    }
    return spec;
  }
};

}  // namespace

AlgorithmSpec parse_algorithm(const std::string& text) {
  AlgorithmSpec algo;
  std::string expr = text;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    algo.label = text.substr(0, colon);
    expr = text.substr(colon + 1);
  }
  Parser p{expr};
  do {
    p.skip_ws();
    double weight = 1.0;
    // A leading number must be a weight followed by '*'.
    if (p.pos < expr.size() &&
        (std::isdigit(static_cast<unsigned char>(expr[p.pos])) || expr[p.pos] == '.' ||
         expr[p.pos] == '-')) {
      weight = p.number();
      if (!p.eat('*')) p.fail("expected '*' after weight");
    }
    algo.parts.emplace_back(p.component(), weight);
  } while (p.eat('+'));
  p.skip_ws();
  if (p.pos != expr.size()) p.fail("trailing characters at position " + std::to_string(p.pos));
  if (algo.label.empty()) algo.label = expr;
  return algo;
}

std::vector<AlgorithmSpec> default_roster(double default_decay, double week_decay,
                                          double full_range_decay) {
  auto bl = [](double d) { return ComponentSpec{.kind = ComponentKind::kBaseLevel, .decay = d}; };
  ComponentSpec sp{.kind = ComponentKind::kSpreading};
  ComponentSpec pm{.kind = ComponentKind::kPartialMatching};
  auto val = [](RewardMode mode) {
    return ComponentSpec{.kind = ComponentKind::kValuation, .reward_mode = mode};
  };
  ComponentSpec ns{.kind = ComponentKind::kNoise};
  ComponentSpec tp{.kind = ComponentKind::kTransProb};
  ComponentSpec mr{.kind = ComponentKind::kMostRecent};

  std::vector<AlgorithmSpec> roster;
  auto add = [&](std::string label, std::vector<std::pair<ComponentSpec, double>> parts) {
    roster.push_back({std::move(label), std::move(parts)});
  };
  add("TransProb", {{tp, 1.0}});
  add("PartialMatching", {{pm, 1.0}});
  add("Noise", {{ns, 1.0}});
  add("Valuation(discrete)", {{val(RewardMode::kDiscrete), 1.0}});
  add("Valuation(ratio)", {{val(RewardMode::kRatio), 1.0}});
  add("Valuation(MP)", {{val(RewardMode::kMostPopular), 1.0}});
  add("Spreading", {{sp, 1.0}});
  add("BaseLevel(full-range)", {{bl(full_range_decay), 1.0}});
  add("ACT-R(B,V)", {{bl(default_decay), 1.0}, {val(RewardMode::kMostPopular), 1.0}});
  add("MostRecent", {{mr, 1.0}});
  add("BaseLevel(default)", {{bl(default_decay), 1.0}});
  add("BaseLevel(week)", {{bl(week_decay), 1.0}});
  add("ACT-R(S,V)", {{sp, 1.0}, {val(RewardMode::kMostPopular), 1.0}});
  add("ACT-R(B,S)", {{bl(default_decay), 1.0}, {sp, 1.0}});
  add("ACT-R(B,S,V)",
      {{bl(default_decay), 1.0}, {sp, 1.0}, {val(RewardMode::kMostPopular), 1.0}});
  return roster;
}

}  // namespace actr
