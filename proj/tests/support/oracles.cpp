#include "oracles.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace oracle {

Corner corner(const anm::SpikeTrain& train, double t) {
  std::vector<double> s{0.0};
  for (double x : train.times)
    if (x > 0.0) s.push_back(x);
  s.push_back(train.duration);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == t) {
      const double isi = i + 1 < s.size() ? s[i + 1] - s[i] : s[i] - s[i - 1];
      return {t, t, isi};
    }
  std::size_t i = 0;
  while (s[i + 1] < t) ++i;
  return {s[i], s[i + 1], s[i + 1] - s[i]};
}

double spike_diff(const anm::SpikeTrain& a, const anm::SpikeTrain& b, double t) {
  const Corner c1 = corner(a, t), c2 = corner(b, t);
  const double dtp = std::fabs(c1.previous - c2.previous);
  const double dtf = std::fabs(c1.following - c2.following);
  const double xp = 0.5 * ((t - c1.previous) + (t - c2.previous));
  const double xf = 0.5 * ((c1.following - t) + (c2.following - t));
  const double xisi = 0.5 * (c1.isi + c2.isi);
  return (dtp * xf + dtf * xp) / (xisi * xisi);
}

double dense_distance(const anm::SpikeTrain& a, const anm::SpikeTrain& b, double h) {
  const double T = a.duration;
  double sum = 0.0;
  long i = 0;
  for (; (i + 1) * h <= T; ++i) sum += h * spike_diff(a, b, (i + 0.5) * h);
  const double rest = T - i * h;
  if (rest > 0.0) sum += rest * spike_diff(a, b, i * h + rest / 2.0);
  return sum / T;
}

double grid_step(const anm::SpikeTrain& a, const anm::SpikeTrain& b, double sample_dt) {
  double isi = std::numeric_limits<double>::infinity();
  for (const auto* tr : {&a, &b})
    for (std::size_t i = 1; i < tr->times.size(); ++i) isi = std::min(isi, tr->times[i] - tr->times[i - 1]);
  while (sample_dt >= isi) sample_dt /= 2.0;
  return sample_dt;
}

anm::SpikeTrain random_train(anm::Rng& rng, double duration, double rate) {
  anm::SpikeTrain t;
  t.duration = duration;
  for (int ms = 0; ms < static_cast<int>(duration); ++ms)
    if (rng.chance(rate)) t.times.push_back(ms);
  return t;
}

std::vector<std::vector<double>> lif(const std::vector<std::vector<double>>& weights,
                                     const std::vector<std::vector<double>>& input,
                                     const std::vector<anm::SpikeTrain>& channels, const LifParams& p) {
  const std::size_t n = weights.size();
  const long steps = std::lround(channels.front().duration / p.dt);
  std::vector<double> v(n, 0.0);
  std::vector<int> last_fire(n, -1000000);
  std::vector<bool> fired(n, false);
  std::vector<std::vector<double>> out(n);
  for (long k = 0; k < steps; ++k) {
    std::vector<double> next(n);
    for (std::size_t j = 0; j < n; ++j) {
      double x = v[j] * std::exp(-p.dt / p.tau);
      for (std::size_t c = 0; c < channels.size(); ++c)
        for (double t : channels[c].times)
          if (std::lround(t / p.dt) == k) x += input[c][j];
      for (std::size_t i = 0; i < n; ++i)
        if (fired[i]) x += weights[i][j];
      next[j] = x;
    }
    std::vector<bool> now(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      const bool refractory = k - last_fire[j] <= p.refractory;
      if (!refractory && next[j] >= p.threshold) {
        now[j] = true;
        next[j] = p.reset;
        last_fire[j] = static_cast<int>(k);
        out[j].push_back(static_cast<double>(k) * p.dt);
      }
    }
    v = next;
    fired = now;
  }
  return out;
}

std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(ANM_FIXTURE_DIR) / name; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oracle
