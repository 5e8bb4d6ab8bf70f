#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "asymp/asymptotic.hpp"
#include "asymp/coder.hpp"
#include "asymp/group.hpp"
#include "asymp/order.hpp"
#include "asymp/ordered_tiling.hpp"
#include "asymp/symbolic.hpp"
#include "asymp/tiling.hpp"

namespace asymp {

using Json = nlohmann::json;

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump_canonical(const Json& j);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Bits packed eight to a byte, most significant bit first.
std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t count);

Json point_to_json(const GroupPoint& g);
GroupPoint point_from_json(GroupKind kind, const Json& j);
Json points_to_json(const std::vector<GroupPoint>& pts);
std::vector<GroupPoint> points_from_json(GroupKind kind, const Json& j);

/// Tiling spec schema: {group, levels: [{shapes: [{id, offsets, center,
/// subtile_order, decomposition: [{shape_id, centers}]}], p}]}. A non-unit
/// center re-bases the shape on load; output always carries the unit center.
/// Throws MalformedSpec on schema errors.
Json spec_to_json(const TilingSpec& spec);
TilingSpec spec_from_json(const Json& j);

Json order_to_json(const OrderWindow& w);
OrderWindow order_from_json(const Json& j);

/// {group, floors, cells, bits, mask}; bits and mask are base64 of the packed
/// floor-major bit arrays in canonical cell order.
Json array_point_to_json(const ArrayPoint& x);
ArrayPoint array_point_from_json(const Json& j);

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json validation_to_json(const ValidationReport& r);
Json odometric_to_json(const OdometricReport& r);
Json scan_to_json(const IntervalScan& s);
Json bound_to_json(const BoundReport& r);
Json verdict_to_json(const AsymptoticVerdict& v);
Json coded_to_json(const CodedPoint& y);
Json separation_to_json(const SeparationReport& r);
Json mask_check_to_json(const MaskCheck& m);
Json partition_to_json(const IntervalPartition& p);

}  // namespace asymp
