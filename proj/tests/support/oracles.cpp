#include "oracles.hpp"

#include <cctype>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

namespace aaechat::oracle {
namespace {

double t_density(double x, double df) {
  const double log_c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * M_PI);
  return std::exp(log_c - (df + 1) / 2 * std::log1p(x * x / df));
}

double t_cdf(double x, double df) {
  const int n = 20000;  // even
  const double h = x / n;
  double sum = t_density(0, df) + t_density(x, df);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * t_density(i * h, df);
  return 0.5 + sum * h / 3;
}

template <typename F>
double bisect(F f, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = (lo + hi) / 2;
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

std::string label_key(const std::string& s) {
  std::string out;
  bool space = false;
  for (unsigned char c : s) {
    if (std::isalnum(c)) {
      if (space && !out.empty()) out += ' ';
      space = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      space = true;
    }
  }
  return out;
}

std::set<std::string> tokens(const std::string& s) {
  std::set<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) {
    auto edge = [](unsigned char c) { return std::ispunct(c) && c != '\''; };
    while (!w.empty() && edge(w.front())) w.erase(w.begin());
    while (!w.empty() && edge(w.back())) w.pop_back();
    for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!w.empty()) out.insert(w);
  }
  return out;
}

}  // namespace

double t_quantile_975(double df) {
  static std::mutex mu;
  static std::map<double, double> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(df);
  if (it == cache.end()) {
    it = cache.emplace(df, bisect([df](double x) { return t_cdf(x, df) - 0.975; }, 0.0, 200.0)).first;
  }
  return it->second;
}

double normal_quantile_975() {
  return bisect([](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)) - 0.975; }, 0.0, 10.0);
}

MeanCi mean_ci(const std::vector<int>& scores) {
  MeanCi r;
  double m2 = 0.0;
  for (int s : scores) {
    ++r.n;
    const double delta = s - r.mean;
    r.mean += delta / static_cast<double>(r.n);
    m2 += delta * (s - r.mean);
  }
  if (r.n > 1) {
    const double sd = std::sqrt(m2 / static_cast<double>(r.n - 1));
    r.half_width = t_quantile_975(static_cast<double>(r.n - 1)) * sd / std::sqrt(static_cast<double>(r.n));
  }
  return r;
}

std::map<std::pair<std::string, std::string>, double> feature_rates(const std::vector<tagger::TaggedTurn>& turns) {
  std::set<std::string> chatbots;
  for (const auto& t : turns) chatbots.insert(t.chatbot_id);
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& bot : chatbots) {
    for (auto cat : tagger::kAllCategories) {
      double n_turns = 0;
      double n_changes = 0;
      for (const auto& t : turns) {
        if (t.chatbot_id != bot) continue;
        n_turns += 1;
        for (const auto& c : t.result.changes) {
          if (c.category == cat) n_changes += 1;
        }
      }
      out[{bot, std::string(tagger::to_string(cat))}] = n_changes / n_turns;
    }
  }
  return out;
}

double matcher_accuracy(const std::vector<tagger::GoldExample>& gold, const std::vector<tagger::TagResult>& preds) {
  std::size_t total = 0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const auto& label : gold[i].labels) {
      ++total;
      const auto gold_tokens = tokens(label.span);
      bool found = false;
      for (const auto& c : preds[i].changes) {
        if (label_key(c.feature_label) != label_key(label.feature)) continue;
        for (const auto& t : tokens(c.aave_phrase)) found = found || gold_tokens.count(t) > 0;
      }
      hit += found ? 1 : 0;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace aaechat::oracle
