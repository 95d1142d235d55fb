#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace troptrack {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using Vec = std::vector<Rat>;
using Mat = std::vector<std::vector<Rat>>;

inline int sgn(const Rat& r) { return r.sign(); }

// Serialization format is "p/q" with q > 0 and gcd(p,q)=1; "p" alone means p/1.
std::string rat_str(const Rat& r);
std::optional<Rat> parse_rat(const std::string& s);

double rat_double(const Rat& r);

}  // namespace troptrack
