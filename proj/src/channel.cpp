#include "covert/channel.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "covert/rng.hpp"

namespace covert {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string("ChannelParams: ") + name + " must be positive and finite");
  }
}

ComplexScalar draw(StreamRng& rng, double sigma) {
  double re = rng.normal(sigma);
  double im = rng.normal(sigma);
  return {re, im};
}

std::string format_complex(ComplexScalar z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g:%.17g", z.real(), z.imag());
  return buf;
}

double parse_double(std::string_view token) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw std::invalid_argument("realization text: bad number '" + std::string(token) + "'");
  }
  return value;
}

ComplexScalar parse_complex(std::string_view token) {
  auto colon = token.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("realization text: expected re:im, got '" + std::string(token) + "'");
  }
  return {parse_double(token.substr(0, colon)), parse_double(token.substr(colon + 1))};
}

std::vector<ComplexScalar> parse_row(std::istream& in, std::string_view key, std::size_t count) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("realization text: missing row " + std::string(key));
  std::istringstream row(line);
  std::string name;
  row >> name;
  if (name != key) throw std::invalid_argument("realization text: expected row " + std::string(key));
  std::vector<ComplexScalar> values;
  std::string token;
  while (row >> token) values.push_back(parse_complex(token));
  if (values.size() != count) throw std::invalid_argument("realization text: wrong length in row " + std::string(key));
  return values;
}

constexpr std::string_view kHeader = "covert-realization v1";

}  // namespace

void ChannelParams::validate() const {
  if (n_elements == 0) throw std::invalid_argument("ChannelParams: n_elements must be >= 1");
  require_positive(sigma_as, "sigma_as");
  require_positive(sigma_sw, "sigma_sw");
  require_positive(sigma_sb, "sigma_sb");
  require_positive(sigma_aw, "sigma_aw");
  require_positive(sigma_ab, "sigma_ab");
  require_positive(noise_var_w, "noise_var_w");
  require_positive(noise_var_b, "noise_var_b");
  require_positive(tx_power, "tx_power");
}

void ChannelRealization::validate() const {
  const std::size_t n = h_as.size();
  if (g_sw.size() != n || g_sb.size() != n) {
    throw std::invalid_argument("ChannelRealization: coefficient vectors differ in length");
  }
  auto all_finite = [](const std::vector<ComplexScalar>& v) {
    for (auto z : v)
      if (!is_finite(z)) return false;
    return true;
  };
  if (!all_finite(h_as) || !all_finite(g_sw) || !all_finite(g_sb) || !is_finite(h_aw) || !is_finite(h_ab)) {
    throw std::invalid_argument("ChannelRealization: non-finite coefficient");
  }
}

ChannelRealization sample_realization(const ChannelParams& params, std::uint64_t stream) {
  params.validate();
  StreamRng rng(params.seed, stream);
  const std::size_t n = params.n_elements;
  ChannelRealization out;
  out.h_as.reserve(n);
  out.g_sw.reserve(n);
  out.g_sb.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.h_as.push_back(draw(rng, params.sigma_as));
  for (std::size_t i = 0; i < n; ++i) out.g_sw.push_back(draw(rng, params.sigma_sw));
  for (std::size_t i = 0; i < n; ++i) out.g_sb.push_back(draw(rng, params.sigma_sb));
  out.h_aw = draw(rng, params.sigma_aw);
  out.h_ab = draw(rng, params.sigma_ab);
  return out;
}

std::vector<CascadeTerm> cascade_terms(const ChannelRealization& realization, Receiver receiver) {
  realization.validate();
  const auto& g = receiver == Receiver::Willie ? realization.g_sw : realization.g_sb;
  std::vector<CascadeTerm> terms;
  terms.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) terms.push_back(CascadeTerm::from(g[i] * realization.h_as[i]));
  return terms;
}

std::string to_text(const ChannelRealization& realization) {
  realization.validate();
  std::ostringstream out;
  out << kHeader << '\n' << "n_elements " << realization.n_elements() << '\n';
  auto row = [&](std::string_view key, const std::vector<ComplexScalar>& values) {
    out << key;
    for (auto z : values) out << ' ' << format_complex(z);
    out << '\n';
  };
  row("h_as", realization.h_as);
  row("g_sw", realization.g_sw);
  row("g_sb", realization.g_sb);
  row("h_aw", {realization.h_aw});
  row("h_ab", {realization.h_ab});
  return out.str();
}

ChannelRealization realization_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::invalid_argument("realization text: bad header");
  if (!std::getline(in, line)) throw std::invalid_argument("realization text: missing n_elements");
  std::istringstream count_row(line);
  std::string key;
  long long n = -1;
  count_row >> key >> n;
  if (key != "n_elements" || n < 0) throw std::invalid_argument("realization text: bad n_elements row");
  const auto count = static_cast<std::size_t>(n);

  ChannelRealization out;
  out.h_as = parse_row(in, "h_as", count);
  out.g_sw = parse_row(in, "g_sw", count);
  out.g_sb = parse_row(in, "g_sb", count);
  out.h_aw = parse_row(in, "h_aw", 1).front();
  out.h_ab = parse_row(in, "h_ab", 1).front();
  out.validate();
  return out;
}

}  // namespace covert
