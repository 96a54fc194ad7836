#pragma once

// The joint-supplier pre-positioning model: immutable problem instance
// (materials, disaster areas, suppliers, link data, count bounds), the four
// objective evaluators (cost, coverage, supply gap, rescue time), the
// constraint checker and the coupling-driven demand scaling.
//
// Demand semantics: a common material's effective demand is its raw demand
// times the material's conversion coefficient; special materials use their
// raw demand. Stock committed at a supplier is attributed to the areas it
// serves proportionally to their effective demand.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prepos/common.hpp"

namespace prepos::model {

enum class MaterialKind { special, common };
enum class SupplierKind { government, framework, existing };

inline std::string to_string(SupplierKind k) {
    switch (k) {
        case SupplierKind::government: return "government";
        case SupplierKind::framework: return "framework";
        default: return "existing";
    }
}

inline std::string to_string(MaterialKind k) {
    return k == MaterialKind::special ? "special" : "general";
}

struct Material {
    std::string id;
    MaterialKind kind{MaterialKind::common};
    double converted_area{1.0};                  // m^2 of storage per unit
    std::optional<double> conversion_coeff;      // common materials only
    double max_rescue_time_h{1.0};

    double effective_factor() const {
        return kind == MaterialKind::common ? conversion_coeff.value_or(1.0) : 1.0;
    }
};

struct DisasterArea {
    std::string id;
    std::string disaster_type;
    double longitude{0};
    double latitude{0};
    std::vector<double> demand;  // raw units per material index
};

struct Supplier {
    std::string id;
    SupplierKind kind{SupplierKind::government};
    double capacity_area{0};              // m^2
    double fixed_cost{0};                 // government construction/operation
    std::vector<double> unit_cost;        // per material index
    std::vector<double> existing_stock;   // per material index; existing only
    double coverage_share{0};             // E_j in [0, 1]
    double longitude{0};
    double latitude{0};
};

struct Link {
    double distance_km{0};
    double speed_kmh{1};
    double min_radius_km{0};
    double max_radius_km{0};

    double travel_time_h() const { return distance_km / speed_kmh; }
};

struct CountBounds {
    int min_count{0};
    int max_count{std::numeric_limits<int>::max()};
};

struct ProblemInstance {
    std::vector<Material> materials;
    std::vector<DisasterArea> areas;
    std::vector<Supplier> suppliers;
    std::vector<Link> links;  // row-major suppliers x areas
    CountBounds bounds_government;
    CountBounds bounds_framework;
    CountBounds bounds_existing;
    double big_m{0};  // 0 requests the default of 10x total effective demand

    std::size_t material_count() const { return materials.size(); }
    std::size_t area_count() const { return areas.size(); }
    std::size_t supplier_count() const { return suppliers.size(); }

    const Link& link(std::size_t j, std::size_t f) const { return links[j * areas.size() + f]; }
    Link& link(std::size_t j, std::size_t f) { return links[j * areas.size() + f]; }

    double effective_demand(std::size_t f, std::size_t i) const {
        return areas[f].demand[i] * materials[i].effective_factor();
    }

    double total_effective_demand(std::size_t i) const {
        double acc = 0.0;
        for (std::size_t f = 0; f < areas.size(); ++f) acc += effective_demand(f, i);
        return acc;
    }

    double resolved_big_m() const {
        if (big_m > 0.0) return big_m;
        double total = 0.0;
        for (std::size_t i = 0; i < materials.size(); ++i) total += total_effective_demand(i);
        return std::max(1.0, 10.0 * total);
    }

    int supplier_count_of(SupplierKind kind) const {
        int n = 0;
        for (const auto& s : suppliers) n += s.kind == kind;
        return n;
    }

    const CountBounds& bounds_for(SupplierKind kind) const {
        switch (kind) {
            case SupplierKind::government: return bounds_government;
            case SupplierKind::framework: return bounds_framework;
            default: return bounds_existing;
        }
    }

    /// X + y + Z
    std::size_t decision_variable_count() const {
        return suppliers.size() * (1 + areas.size() + materials.size());
    }

    /// Instantiated rows across the fifteen numbered constraint families plus
    /// the per-link rescue-time limits.
    std::size_t constraint_row_count() const {
        const std::size_t j = suppliers.size(), f = areas.size(), i = materials.size();
        std::size_t framework_suppliers = 0, specials = 0;
        for (const auto& s : suppliers) framework_suppliers += s.kind == SupplierKind::framework;
        for (const auto& m : materials) specials += m.kind == MaterialKind::special;
        std::size_t commons = i - specials;
        return framework_suppliers * i  // framework quantity linkage
               + 3                      // count bounds per supplier kind
               + j                      // storage capacity
               + f * commons + f * specials  // demand satisfaction
               + j * specials           // special stock forces service
               + j * f                  // activation y <= X
               + j                      // stocking X <= sum Z
               + f                      // every area served
               + j + j * f              // binary domains
               + j * i                  // non-negative stock
               + j * f;                 // rescue-time limits
    }

    /// Referential and range validation. Throws RangeError on bad values and
    /// DimensionError on shape mismatches.
    void validate() const {
        if (materials.empty() || areas.empty() || suppliers.empty())
            throw EmptyInput("instance needs materials, areas and suppliers");
        if (links.size() != suppliers.size() * areas.size())
            throw DimensionError("every (supplier, area) pair needs link data");
        std::set<std::string> ids;
        for (const auto& m : materials) {
            if (!ids.insert(m.id).second) throw IntegrityError("duplicate material id " + m.id);
            if (!(m.converted_area > 0.0)) throw RangeError("converted area must be positive");
            if (!(m.max_rescue_time_h > 0.0)) throw RangeError("max rescue time must be positive");
            if (m.kind == MaterialKind::common) {
                if (!m.conversion_coeff || *m.conversion_coeff < 0.0)
                    throw RangeError("common material " + m.id + " needs a conversion coefficient");
            } else if (m.conversion_coeff) {
                throw RangeError("special material " + m.id + " must not carry a conversion coefficient");
            }
        }
        ids.clear();
        for (const auto& a : areas) {
            if (!ids.insert(a.id).second) throw IntegrityError("duplicate area id " + a.id);
            if (a.demand.size() != materials.size())
                throw DimensionError("area " + a.id + " demand arity mismatch");
            for (double d : a.demand)
                if (d < 0.0 || !std::isfinite(d)) throw RangeError("negative demand in area " + a.id);
        }
        ids.clear();
        for (const auto& s : suppliers) {
            if (!ids.insert(s.id).second) throw IntegrityError("duplicate supplier id " + s.id);
            if (!(s.capacity_area > 0.0)) throw RangeError("supplier " + s.id + " capacity must be positive");
            if (s.fixed_cost < 0.0) throw RangeError("negative fixed cost at " + s.id);
            if (s.unit_cost.size() != materials.size() || s.existing_stock.size() != materials.size())
                throw DimensionError("supplier " + s.id + " cost/stock arity mismatch");
            if (s.coverage_share < 0.0 || s.coverage_share > 1.0)
                throw RangeError("coverage share of " + s.id + " outside [0, 1]");
            double stock_area = 0.0;
            for (std::size_t i = 0; i < materials.size(); ++i) {
                if (s.unit_cost[i] < 0.0) throw RangeError("negative unit cost at " + s.id);
                if (s.existing_stock[i] < 0.0) throw RangeError("negative stock at " + s.id);
                stock_area += materials[i].converted_area * s.existing_stock[i];
            }
            if (s.kind != SupplierKind::existing && stock_area > 0.0)
                throw RangeError("non-existing supplier " + s.id + " cannot carry pre-existing stock");
            if (stock_area > s.capacity_area + 1e-9)
                throw RangeError("existing stock exceeds capacity at " + s.id);
        }
        for (const auto& l : links) {
            if (!(l.speed_kmh > 0.0)) throw RangeError("link speed must be positive");
            if (l.distance_km < 0.0) throw RangeError("negative link distance");
            if (l.min_radius_km < 0.0 || l.min_radius_km > l.max_radius_km)
                throw RangeError("link radii must satisfy 0 <= r <= R");
        }
        for (SupplierKind kind : {SupplierKind::government, SupplierKind::framework, SupplierKind::existing}) {
            const auto& b = bounds_for(kind);
            if (b.min_count < 0 || b.min_count > b.max_count)
                throw RangeError("count bounds must satisfy 0 <= min <= max");
        }
    }
};

/// All four objectives in minimization direction (coverage negated).
struct ObjectiveVector {
    double cost{0};
    double neg_coverage{0};
    double gap{0};
    double time_h{0};

    std::array<double, 4> as_array() const { return {cost, neg_coverage, gap, time_h}; }

    bool operator==(const ObjectiveVector&) const = default;
};

struct CandidateSolution {
    std::vector<std::uint8_t> selected;  // X_j
    std::vector<std::uint8_t> serves;    // y_jf, row-major suppliers x areas
    std::vector<double> stock;           // Z_ji units, row-major suppliers x materials
    std::optional<ObjectiveVector> objectives;
    double violation_total{-1.0};  // negative until evaluated
    int unserved_areas{0};

    static CandidateSolution zeros(const ProblemInstance& inst) {
        CandidateSolution s;
        s.selected.assign(inst.supplier_count(), 0);
        s.serves.assign(inst.supplier_count() * inst.area_count(), 0);
        s.stock.assign(inst.supplier_count() * inst.material_count(), 0.0);
        return s;
    }

    bool evaluated() const { return objectives.has_value() && violation_total >= 0.0; }
    bool feasible() const { return violation_total == 0.0; }

    std::uint8_t serve(std::size_t j, std::size_t f, std::size_t areas) const {
        return serves[j * areas + f];
    }
    double stock_at(std::size_t j, std::size_t i, std::size_t materials) const {
        return stock[j * materials + i];
    }

    void check_shape(const ProblemInstance& inst) const {
        if (selected.size() != inst.supplier_count() ||
            serves.size() != inst.supplier_count() * inst.area_count() ||
            stock.size() != inst.supplier_count() * inst.material_count())
            throw DimensionError("solution dimensions do not match the instance");
    }
};

/// Layout cost: government suppliers pay construction plus per-unit stocking
/// when selected, existing suppliers pay per unit drawn, framework suppliers
/// pay per committed unit when selected.
inline double evaluate_cost(const CandidateSolution& sol, const ProblemInstance& inst) {
    sol.check_shape(inst);
    const std::size_t ni = inst.material_count();
    double total = 0.0;
    for (std::size_t j = 0; j < inst.supplier_count(); ++j) {
        const auto& s = inst.suppliers[j];
        double stocking = 0.0;
        for (std::size_t i = 0; i < ni; ++i) stocking += s.unit_cost[i] * sol.stock[j * ni + i];
        switch (s.kind) {
            case SupplierKind::government:
                if (sol.selected[j]) total += s.fixed_cost + stocking;
                break;
            case SupplierKind::framework:
                if (sol.selected[j]) total += stocking;
                break;
            case SupplierKind::existing:
                total += stocking;
                break;
        }
    }
    return total;
}

/// Gradual coverage: full inside the minimum radius, zero beyond the maximum,
/// linear decay between. Degenerate r == R yields a step function.
inline double coverage_satisfaction(double d, double r, double R) {
    if (r < 0.0 || r > R) throw RangeError("radii must satisfy 0 <= r <= R");
    if (d <= r) return 1.0;
    if (d >= R) return 0.0;
    return (R - d) / (R - r);
}

/// Covered expectation summed over active service pairs (higher is better;
/// the objective vector stores its negation).
inline double evaluate_coverage(const CandidateSolution& sol, const ProblemInstance& inst) {
    sol.check_shape(inst);
    const std::size_t nf = inst.area_count();
    double total = 0.0;
    for (std::size_t j = 0; j < inst.supplier_count(); ++j) {
        if (inst.suppliers[j].coverage_share == 0.0) continue;
        for (std::size_t f = 0; f < nf; ++f) {
            if (!sol.serves[j * nf + f]) continue;
            const Link& l = inst.link(j, f);
            total += inst.suppliers[j].coverage_share *
                     coverage_satisfaction(l.distance_km, l.min_radius_km, l.max_radius_km);
        }
    }
    return total;
}

namespace detail {

/// Stock attributed to (area, material) pairs: each supplier's committed
/// stock is split over the areas it serves proportionally to their effective
/// demand for that material.
inline std::vector<double> attributed_supply(const CandidateSolution& sol,
                                             const ProblemInstance& inst) {
    const std::size_t nf = inst.area_count(), ni = inst.material_count();
    std::vector<double> alloc(nf * ni, 0.0);
    std::vector<double> demand(nf * ni);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t i = 0; i < ni; ++i) demand[f * ni + i] = inst.effective_demand(f, i);
    for (std::size_t j = 0; j < inst.supplier_count(); ++j) {
        for (std::size_t i = 0; i < ni; ++i) {
            double z = sol.stock[j * ni + i];
            if (z <= 0.0) continue;
            double served_demand = 0.0;
            for (std::size_t f = 0; f < nf; ++f)
                if (sol.serves[j * nf + f]) served_demand += demand[f * ni + i];
            if (served_demand <= 0.0) continue;
            for (std::size_t f = 0; f < nf; ++f)
                if (sol.serves[j * nf + f])
                    alloc[f * ni + i] += z * demand[f * ni + i] / served_demand;
        }
    }
    return alloc;
}

}  // namespace detail

/// Total unmet effective demand across areas and materials.
inline double evaluate_supply_gap(const CandidateSolution& sol, const ProblemInstance& inst) {
    sol.check_shape(inst);
    auto alloc = detail::attributed_supply(sol, inst);
    const std::size_t nf = inst.area_count(), ni = inst.material_count();
    double gap = 0.0;
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t i = 0; i < ni; ++i)
            gap += std::max(0.0, inst.effective_demand(f, i) - alloc[f * ni + i]);
    return gap;
}

struct RescueTime {
    double hours{0};
    int unserved_areas{0};
};

/// Worst arrival time per area, summed over areas. Areas with no serving
/// supplier contribute the big-M penalty and are counted.
inline RescueTime evaluate_rescue_time(const CandidateSolution& sol, const ProblemInstance& inst) {
    sol.check_shape(inst);
    const std::size_t nf = inst.area_count();
    RescueTime result;
    const double penalty = inst.resolved_big_m();
    for (std::size_t f = 0; f < nf; ++f) {
        double worst = -1.0;
        for (std::size_t j = 0; j < inst.supplier_count(); ++j)
            if (sol.serves[j * nf + f]) worst = std::max(worst, inst.link(j, f).travel_time_h());
        if (worst < 0.0) {
            result.hours += penalty;
            ++result.unserved_areas;
        } else {
            result.hours += worst;
        }
    }
    return result;
}

struct Violation {
    std::string family;
    std::string detail;
    double magnitude{0};
};

struct ConstraintReport {
    std::vector<Violation> violations;
    double total{0};

    bool feasible() const { return total == 0.0; }
    bool has_family(const std::string& family) const {
        return std::any_of(violations.begin(), violations.end(),
                           [&](const Violation& v) { return v.family == family; });
    }
};

/// Checks the fifteen numbered constraint families plus the per-link
/// rescue-time limits. Each violation is reported in the constraint's
/// natural scale: capacity excess in m^2, demand shortfall in units, count
/// deviations in suppliers, time excess in hours.
inline ConstraintReport check_constraints(const CandidateSolution& sol,
                                          const ProblemInstance& inst) {
    sol.check_shape(inst);
    const std::size_t nj = inst.supplier_count(), nf = inst.area_count(), ni = inst.material_count();
    ConstraintReport report;
    auto add = [&](std::string family, std::string detail, double magnitude) {
        if (magnitude <= 0.0) return;
        report.violations.push_back({std::move(family), std::move(detail), magnitude});
        report.total += magnitude;
    };
    const double big_m = inst.resolved_big_m();

    // framework_quantity: committed framework stock requires selection
    for (std::size_t j = 0; j < nj; ++j) {
        if (inst.suppliers[j].kind != SupplierKind::framework) continue;
        for (std::size_t i = 0; i < ni; ++i) {
            double excess = sol.stock[j * ni + i] - big_m * sol.selected[j];
            add("framework_quantity", inst.suppliers[j].id + "/" + inst.materials[i].id, excess);
        }
    }

    // count bounds per supplier kind
    for (SupplierKind kind : {SupplierKind::government, SupplierKind::framework, SupplierKind::existing}) {
        int count = 0;
        for (std::size_t j = 0; j < nj; ++j)
            if (inst.suppliers[j].kind == kind) count += sol.selected[j];
        const auto& b = inst.bounds_for(kind);
        double under = std::max(0, b.min_count - count);
        double over = b.max_count == std::numeric_limits<int>::max()
                          ? 0.0
                          : std::max(0, count - b.max_count);
        add("count_" + to_string(kind), to_string(kind), under + over);
    }

    // storage capacity by converted area; existing suppliers also cannot draw
    // beyond their pre-existing stock
    for (std::size_t j = 0; j < nj; ++j) {
        const auto& s = inst.suppliers[j];
        double used = 0.0;
        for (std::size_t i = 0; i < ni; ++i)
            used += inst.materials[i].converted_area * sol.stock[j * ni + i];
        add("capacity_" + to_string(s.kind), s.id, used - s.capacity_area);
        if (s.kind == SupplierKind::existing) {
            for (std::size_t i = 0; i < ni; ++i)
                add("capacity_existing", s.id + "/" + inst.materials[i].id,
                    sol.stock[j * ni + i] - s.existing_stock[i]);
        }
    }

    // demand satisfaction per (area, material), attributed supply
    auto alloc = detail::attributed_supply(sol, inst);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t i = 0; i < ni; ++i) {
            double shortfall = inst.effective_demand(f, i) - alloc[f * ni + i];
            if (shortfall <= 1e-9) continue;
            const char* family =
                inst.materials[i].kind == MaterialKind::common ? "demand_common" : "demand_special";
            add(family, inst.areas[f].id + "/" + inst.materials[i].id, shortfall);
        }

    // special stock at a supplier forces it to serve at least one area
    for (std::size_t j = 0; j < nj; ++j) {
        bool has_special = false;
        for (std::size_t i = 0; i < ni; ++i)
            has_special |= inst.materials[i].kind == MaterialKind::special && sol.stock[j * ni + i] > 0.0;
        if (!has_special) continue;
        bool serves_any = false;
        for (std::size_t f = 0; f < nf; ++f) serves_any |= sol.serves[j * nf + f] != 0;
        if (!serves_any) add("special_stock_service", inst.suppliers[j].id, 1.0);
    }

    // activation y <= X and stocking X <= sum Z
    for (std::size_t j = 0; j < nj; ++j) {
        int dangling = 0;
        for (std::size_t f = 0; f < nf; ++f)
            dangling += sol.serves[j * nf + f] > sol.selected[j];
        add("activation", inst.suppliers[j].id, static_cast<double>(dangling));
        double stocked = 0.0;
        for (std::size_t i = 0; i < ni; ++i) stocked += sol.stock[j * ni + i];
        if (sol.selected[j] && stocked <= 0.0) add("stocking", inst.suppliers[j].id, 1.0);
    }

    // every area is served by someone
    for (std::size_t f = 0; f < nf; ++f) {
        bool served = false;
        for (std::size_t j = 0; j < nj; ++j) served |= sol.serves[j * nf + f] != 0;
        if (!served) add("service", inst.areas[f].id, 1.0);
    }

    // decision-variable domains
    int non_binary = 0;
    for (auto v : sol.selected) non_binary += v > 1;
    for (auto v : sol.serves) non_binary += v > 1;
    add("binary_domain", "x/y", static_cast<double>(non_binary));
    double negative_stock = 0.0;
    for (std::size_t j = 0; j < nj; ++j)
        for (std::size_t i = 0; i < ni; ++i)
            negative_stock += std::max(0.0, -sol.stock[j * ni + i]);
    add("stock_domain", "z", negative_stock);

    // rescue-time limits: an active link delivering a demanded material must
    // arrive within that material's limit
    for (std::size_t j = 0; j < nj; ++j)
        for (std::size_t f = 0; f < nf; ++f) {
            if (!sol.serves[j * nf + f]) continue;
            double t = inst.link(j, f).travel_time_h();
            for (std::size_t i = 0; i < ni; ++i) {
                if (sol.stock[j * ni + i] <= 0.0 || inst.effective_demand(f, i) <= 0.0) continue;
                double limit = inst.materials[i].max_rescue_time_h;
                add("rescue_time",
                    inst.suppliers[j].id + "/" + inst.areas[f].id + "/" + inst.materials[i].id,
                    t - limit);
            }
        }

    return report;
}

/// Evaluates and caches all four objectives plus the violation total.
inline const ObjectiveVector& evaluate(CandidateSolution& sol, const ProblemInstance& inst) {
    ObjectiveVector obj;
    obj.cost = evaluate_cost(sol, inst);
    obj.neg_coverage = -evaluate_coverage(sol, inst);
    obj.gap = evaluate_supply_gap(sol, inst);
    auto rescue = evaluate_rescue_time(sol, inst);
    obj.time_h = rescue.hours;
    sol.unserved_areas = rescue.unserved_areas;
    sol.objectives = obj;
    sol.violation_total = check_constraints(sol, inst).total;
    return *sol.objectives;
}

/// Compound-disaster scenario: the coupling degree C and a risk index scale
/// the demand of every area whose disaster type participates in the scenario.
struct ScenarioSpec {
    std::vector<std::string> active_disasters;
    std::optional<double> coupling_c;  // absent for single-disaster scenarios
    double risk_index{0};
    double risk_reference{10.0};
};

/// Returns a copy of the instance with demand scaled by
/// (1 + C * risk / risk_reference) in the active areas. Single-disaster
/// scenarios (no coupling degree) leave demand untouched.
inline ProblemInstance coupled_demand(const ProblemInstance& base, const ScenarioSpec& scenario) {
    if (scenario.coupling_c && (*scenario.coupling_c < 0.0 || *scenario.coupling_c > 1.0))
        throw RangeError("coupling degree must lie in [0, 1]");
    if (scenario.risk_index < 0.0)
        throw RangeError("risk index must be non-negative");
    if (!(scenario.risk_reference > 0.0))
        throw RangeError("risk reference must be positive");
    std::set<std::string> known;
    for (const auto& a : base.areas) known.insert(a.disaster_type);
    for (const auto& d : scenario.active_disasters)
        if (!known.count(d)) throw UnknownScenario("no area carries disaster type " + d);

    ProblemInstance scaled = base;
    if (!scenario.coupling_c) return scaled;
    double factor = 1.0 + *scenario.coupling_c * scenario.risk_index / scenario.risk_reference;
    std::set<std::string> active(scenario.active_disasters.begin(), scenario.active_disasters.end());
    for (auto& area : scaled.areas)
        if (active.count(area.disaster_type))
            for (double& d : area.demand) d *= factor;
    return scaled;
}

}  // namespace prepos::model
