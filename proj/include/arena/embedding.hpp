#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

inline constexpr std::size_t kDefaultEmbeddingDim = 64;
inline constexpr double kPredicateTokenWeight = 4.0;
inline constexpr double kArgumentTokenWeight = 1.0;

using EmbeddingVector = std::vector<double>;

/// Splits task source text into its predicate-name token followed by one
/// token per "name=value" argument (whitespace stripped). Text without a
/// parenthesized argument list is a single predicate token.
std::vector<std::string> task_tokens(std::string_view source_text);

/// Feature-hashing embedding. Each token hashes to a pseudo-random +-1
/// vector; the predicate token is weighted 4, each argument token 1, and the
/// weighted sum is L2-normalized. Tasks sharing a predicate therefore share a
/// dominant component and land close together, while distinct predicates are
/// near-orthogonal in expectation.
///
/// Throws ConfigError on empty text or dim == 0.
EmbeddingVector embed_task(std::string_view source_text, std::size_t dim = kDefaultEmbeddingDim);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace arena
