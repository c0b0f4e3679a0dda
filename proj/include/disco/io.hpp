#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "disco/bounds.hpp"
#include "disco/chain.hpp"
#include "disco/chassis.hpp"
#include "disco/decider.hpp"
#include "disco/spectrum.hpp"

namespace disco {

using nlohmann::json;

// Doubles are written as shortest round-trip decimals; infinite values as
// the strings "inf" / "-inf".
json real_to_json(double x);
double real_from_json(const json& j);

json to_json(const Chain& chain);
/// Throws MalformedInput for anything but an array of non-negative integers.
Chain chain_from_json(const json& j);

/// {start, scale, moves:[{op:"ins"|"del", pos, point?}]}
json to_json(const Homotopy& h);
Homotopy homotopy_from_json(const json& j);

json to_json(const H1Class& c);
json to_json(const H1Summary& s);
json to_json(const NullVerdict& v);
json to_json(const FreeHomotopyResult& r);

json to_json(const Chassis& chassis);
json to_json(const Presentation& p);
json to_json(const SimplifiedPresentation& p);

/// Adjacency list, projection map and the fiber over the base vertex.
json to_json(const CoverGraph& cover, double fiber_radius);
json to_json(const ShortClasses& s);
json to_json(const GammaEstimate& g);

json to_json(const PersistenceInterval& p);
json to_json(const Triad& t);
json to_json(const CriticalValue& c);
json to_json(const SpectrumReport& r);
json to_json(const EmbeddingReport& e);

json to_json(const BoundReport& r);

/// Plot-ready rows "scale,multiplicity" and "birth,death".
void write_spectrum_csv(std::ostream& out, const SpectrumReport& r);
void write_persistence_csv(std::ostream& out, const SpectrumReport& r);

/// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

}  // namespace disco
