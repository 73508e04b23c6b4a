#include "arena/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "arena/rng.hpp"
#include "arena/types.hpp"

namespace arena {
namespace {

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

void accumulate(EmbeddingVector& v, std::string_view token, double weight) {
  std::uint64_t state = fnv1a64(token);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i % 64 == 0) bits = state = mix64(state);
    v[i] += (bits >> (i % 64)) & 1 ? weight : -weight;
  }
}

}  // namespace

std::vector<std::string> task_tokens(std::string_view source_text) {
  std::vector<std::string> tokens;
  const auto open = source_text.find('(');
  const auto close = source_text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    tokens.push_back(strip(source_text));
    return tokens;
  }
  tokens.push_back(strip(source_text.substr(0, open)));
  std::string_view body = source_text.substr(open + 1, close - open - 1);
  while (!body.empty()) {
    const auto comma = body.find(',');
    std::string tok = strip(body.substr(0, comma));
    if (!tok.empty()) tokens.push_back(std::move(tok));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return tokens;
}

EmbeddingVector embed_task(std::string_view source_text, std::size_t dim) {
  if (dim == 0) throw ConfigError("embedding dimension must be >= 1");
  const auto tokens = task_tokens(source_text);
  if (tokens.empty() || tokens.front().empty()) throw ConfigError("cannot embed empty task text");

  EmbeddingVector v(dim, 0.0);
  accumulate(v, tokens.front(), kPredicateTokenWeight);
  for (std::size_t i = 1; i < tokens.size(); ++i) accumulate(v, tokens[i], kArgumentTokenWeight);

  double n = l2_norm(v);
  if (n == 0.0) {
    // argument tokens cancelled the predicate exactly; fall back to it alone
    std::fill(v.begin(), v.end(), 0.0);
    accumulate(v, tokens.front(), 1.0);
    n = l2_norm(v);
  }
  for (double& x : v) x /= n;
  return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

}  // namespace arena
