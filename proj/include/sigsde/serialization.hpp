#ifndef SIGSDE_SERIALIZATION_HPP
#define SIGSDE_SERIALIZATION_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "sigsde/discrete_path.hpp"
#include "sigsde/linear_functional.hpp"
#include "sigsde/payoffs.hpp"
#include "sigsde/sig_sde.hpp"

namespace sigsde {

/// Shortest decimal rendering that parses back to the identical double.
std::string format_double(double value);

/// {"d": int, "terms": [{"word": [int...], "coef": float}, ...]} with terms
/// in length-then-lexicographic word order. Round-trips bit-exactly.
nlohmann::json functional_to_json(const LinearFunctional& f);
LinearFunctional functional_from_json(const nlohmann::json& j,
                                      int max_order = LinearFunctional::kUnboundedOrder);

/// {"N": int, "x0": float, "ell": <functional>}
nlohmann::json params_to_json(const SigSdeParams& params);
SigSdeParams params_from_json(const nlohmann::json& j);

/// Functional fields plus {"maturity": float, "order": int}.
nlohmann::json payoff_to_json(const SignaturePayoff& payoff);
SignaturePayoff payoff_from_json(const nlohmann::json& j);

/// CSV with header time,c1,...,cd; one row per sample; exact round-trip.
std::string path_to_csv(const DiscretePath& path);
DiscretePath path_from_csv(const std::string& csv);

/// CSV with header kind,strike,maturity,barrier,price; the barrier field is
/// empty for non-barrier kinds, the price field may be empty.
std::string instruments_to_csv(const std::vector<MarketInstrument>& instruments);
std::vector<MarketInstrument> instruments_from_csv(const std::string& csv);

/// Small file helpers used by the command layer.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace sigsde

#endif
