#include "ifslab/family.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <set>
#include <sstream>

#include "ifslab/error.hpp"
#include "ifslab/parallel.hpp"
#include "ifslab/tail.hpp"

namespace ifslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string gamma_text(Complex g) {
    std::ostringstream os;
    os << g.real() << (g.imag() < 0 ? "-" : "+") << std::abs(g.imag()) << "i";
    return os.str();
}

SystemSpec example_v_spec(const ExampleV& f, Complex gamma) {
    if (!(f.a > 0 && f.a < 0.5) || !(f.a3 > 0 && f.a3 < 1) || !(f.r > 0))
        throw Error(ErrorCode::MalformedSpec, "ExampleV needs 0 < a < 1/2, 0 < a3 < 1, r > 0");
    if (f.z1 == f.z2 || f.z1 == f.z3 || f.z2 == f.z3)
        throw Error(ErrorCode::MalformedSpec, "ExampleV fixed points must be distinct");
    if (!(std::abs(gamma) < f.r))
        throw Error(ErrorCode::OutOfDomain, "gamma " + gamma_text(gamma) + " is outside B(0, r)");
    const Complex a1 = 4.0 * f.a * (0.5 + gamma) * (0.5 + gamma);
    const Complex a2 = 4.0 * f.a * (0.5 - gamma) * (0.5 - gamma);
    SystemSpec spec;
    spec.space = SeedSpace(Disk{{0.0, 0.0}, 1.0});
    spec.generators = {Similarity{a1, (1.0 - a1) * f.z1}, Similarity{a2, (1.0 - a2) * f.z2}};
    spec.tail = PowerLogTail{3, example_v_tail_scale(f), 1.0, 2.0};
    return spec;
}

SystemSpec scaling_spec(const ScalingFamily& f, Complex gamma) {
    if (!f.domain.contains(gamma))
        throw Error(ErrorCode::OutOfDomain, "gamma " + gamma_text(gamma) + " is outside the family domain");
    SystemSpec spec = f.base;
    const Complex shift = (1.0 - gamma) * f.center;
    if (f.scales_all()) {
        for (auto& g : spec.generators) g = compose_affine(g, gamma, shift);
        const double m = std::abs(gamma);
        std::visit(overloaded{[](NoTail&) {}, [&](auto& t) { t.scale *= m; }}, spec.tail);
        return spec;
    }
    for (const std::size_t letter : f.scaled) {
        if (letter < 1 || letter > spec.generators.size())
            throw Error(ErrorCode::UnknownLetter, "scaled letter " + std::to_string(letter) + " is not an explicit generator");
        spec.generators[letter - 1] = compose_affine(spec.generators[letter - 1], gamma, shift);
    }
    return spec;
}

SystemSpec grid_spec(const GridFamily& f, Complex gamma) {
    for (const auto& [g, spec] : f.entries)
        if (std::abs(g - gamma) <= 1e-12 * (1.0 + std::abs(g))) return spec;
    throw Error(ErrorCode::OutOfDomain, "gamma " + gamma_text(gamma) + " is not a grid entry");
}

int sign_of(const Bracket& p) {
    if (p.is_infinite() || p.lo() > 0.0) return 1;
    if (p.hi() < 0.0) return -1;
    return 0;
}

struct NodeValue {
    Bracket theta;
    Bracket p;
};

NodeValue evaluate_node(const FamilySpec& family, Complex gamma, double tol, const PressureOptions& options) {
    const ValidatedSystem sys = instantiate(family, gamma);
    const Bracket theta = finiteness_parameter(sys, tol);
    return {theta, pressure_estimate(sys, theta.mid(), tol, options).value};
}

LocusVertex refine_edge(const FamilySpec& family, Complex a, Bracket pa, Complex b, Bracket pb, double tol,
                        const PressureOptions& options) {
    const int sa = sign_of(pa);
    for (int it = 0; it < 80; ++it) {
        const Complex m = 0.5 * (a + b);
        const Bracket pm = evaluate_node(family, m, tol, options).p;
        const int sm = sign_of(pm);
        if (sm == 0) return {m, pm};
        if (std::abs(b - a) <= 1e-13 * (1.0 + std::abs(m))) return {m, pa.hull(pb)};
        if (sm == sa) {
            a = m;
            pa = pm;
        } else {
            b = m;
            pb = pm;
        }
    }
    return {0.5 * (a + b), pa.hull(pb)};
}

} // namespace

double example_v_tail_scale(const ExampleV& f) {
    const Bracket s = tail_sum(PowerLogTail{3, 1.0, 1.0, 2.0}, 1.0, 3);
    return (1.0 - 2.0 * f.a) / s.mid();
}

SystemSpec instantiate_spec(const FamilySpec& family, Complex gamma) {
    return std::visit(overloaded{
                          [&](const ExampleV& f) { return example_v_spec(f, gamma); },
                          [&](const ScalingFamily& f) { return scaling_spec(f, gamma); },
                          [&](const GridFamily& f) { return grid_spec(f, gamma); },
                      },
                      family);
}

ValidatedSystem instantiate(const FamilySpec& family, Complex gamma) { return validated(instantiate_spec(family, gamma)); }

SweepRecord sweep_record(const ValidatedSystem& system, Complex gamma, double tol, const PressureOptions& options) {
    SweepRecord rec;
    rec.gamma = gamma;
    const RegularityReport report = classify(system, tol, options);
    rec.theta = report.theta;
    rec.pressure_at_theta = report.pressure_at_theta;
    rec.regularity = report.regularity;
    try {
        rec.h = bowen_dimension(system, tol, options).h;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UndeterminedSign || !e.partial()) throw;
        rec.h = *e.partial();
    }
    return rec;
}

std::vector<SweepRecord> sweep(const FamilySpec& family, const std::vector<Complex>& grid, double tol,
                               const PressureOptions& options) {
    std::vector<SweepRecord> records(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
        try {
            records[k] = sweep_record(instantiate(family, grid[k]), grid[k], tol, options);
        } catch (const std::exception& e) {
            records[k] = SweepRecord{};
            records[k].gamma = grid[k];
            records[k].error = e.what();
        }
    });
    return records;
}

std::string_view to_string(FamilyType t) {
    switch (t) {
    case FamilyType::I: return "I";
    case FamilyType::II: return "II";
    case FamilyType::III: return "III";
    case FamilyType::IV: return "IV";
    case FamilyType::V: return "V";
    case FamilyType::VI: return "VI";
    case FamilyType::VII: return "VII";
    case FamilyType::VIII: return "VIII";
    case FamilyType::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

FamilyVerdict classify_family(const std::vector<SweepRecord>& records, double tol) {
    FamilyVerdict v;
    double h_lo = std::numeric_limits<double>::infinity();
    double h_hi = -std::numeric_limits<double>::infinity();
    std::size_t valid = 0;
    for (const auto& r : records) {
        if (r.error) continue;
        ++valid;
        ++v.counts[r.regularity];
        h_lo = std::min(h_lo, r.h.lo());
        h_hi = std::max(h_hi, r.h.hi());
    }
    if (valid == 0) throw Error(ErrorCode::EmptyRecords, "no sweep records without errors");
    v.h_constant = valid > 1 && h_hi - h_lo < 3 * tol;
    if (v.h_constant) v.h_value = Bracket::of(h_lo, h_hi);

    auto count = [&](RegularityClass c) {
        const auto it = v.counts.find(c);
        return it == v.counts.end() ? std::size_t{0} : it->second;
    };
    const std::size_t cfr = count(RegularityClass::CofinitelyRegular);
    const std::size_t fsr = count(RegularityClass::StronglyRegularNonCofinite);
    const std::size_t cr = count(RegularityClass::CriticallyRegular);
    const std::size_t ir = count(RegularityClass::Irregular);
    const std::size_t und = count(RegularityClass::Undetermined);

    if (und > 0) {
        v.reason = std::to_string(und) + " undetermined record(s)";
        return v;
    }
    if (cfr == valid || fsr == valid) {
        if (valid == 1) {
            v.reason = "single record: constancy of h is untestable";
            return v;
        }
        if (cfr == valid) v.type = v.h_constant ? FamilyType::I : FamilyType::II;
        else v.type = v.h_constant ? FamilyType::III : FamilyType::IV;
        v.reason = v.h_constant ? "one class, h constant" : "one class, h varies";
        return v;
    }
    if (cr == valid) {
        v.type = FamilyType::VI;
        v.reason = "all records critically regular";
    } else if (ir == valid) {
        v.type = FamilyType::VIII;
        v.reason = "all records irregular";
    } else if (cfr == 0 && fsr > 0 && cr > 0 && ir == 0) {
        v.type = FamilyType::V;
        v.reason = "FSR and CR present, no IR or CFR";
    } else if (cfr == 0 && fsr > 0 && cr > 0 && ir > 0) {
        v.type = FamilyType::VII;
        v.reason = "FSR, CR and IR present, no CFR";
    } else {
        v.reason = "class combination matches no type";
    }
    return v;
}

std::vector<Polyline> cr_locus(const FamilySpec& family, const ParameterMesh& mesh, double tol,
                               const PressureOptions& options) {
    const std::size_t nx = mesh.re.size(), ny = mesh.im.size();
    if (nx == 0 || ny == 0) throw Error(ErrorCode::MalformedSpec, "parameter mesh is empty");
    auto node = [&](std::size_t i, std::size_t j) { return Complex{mesh.re[i], mesh.im[j]}; };
    std::vector<NodeValue> values(nx * ny);
    parallel_for(values.size(), [&](std::size_t k) { values[k] = evaluate_node(family, node(k % nx, k / nx), tol, options); });
    auto at = [&](std::size_t i, std::size_t j) -> const NodeValue& { return values[j * nx + i]; };

    double theta_lo = -std::numeric_limits<double>::infinity(), theta_hi = std::numeric_limits<double>::infinity();
    for (const auto& nv : values) {
        theta_lo = std::max(theta_lo, nv.theta.lo());
        theta_hi = std::min(theta_hi, nv.theta.hi());
    }
    if (theta_lo > theta_hi) throw Error(ErrorCode::ThetaNotConstant, "finiteness parameter varies over the mesh");

    // Marching sign: zero nodes count as positive, and an edge from a zero node
    // to a negative one crosses at the zero node itself.
    // Keys: 4 * node + dir for bisected edges, 4 * node + 2 for zero nodes.
    auto march_sign = [&](std::size_t i, std::size_t j) { return sign_of(at(i, j).p) < 0 ? -1 : 1; };
    std::map<std::size_t, LocusVertex> crossing;
    auto edge = [&](std::size_t i, std::size_t j, int dir) -> std::optional<std::size_t> {
        const std::size_t i2 = i + (dir == 0), j2 = j + (dir == 1);
        if (march_sign(i, j) == march_sign(i2, j2)) return std::nullopt;
        for (const auto& [a, b] : {std::pair{i, j}, std::pair{i2, j2}})
            if (sign_of(at(a, b).p) == 0) {
                const std::size_t key = 4 * (b * nx + a) + 2;
                crossing.try_emplace(key, LocusVertex{node(a, b), at(a, b).p});
                return key;
            }
        const std::size_t key = 4 * (j * nx + i) + static_cast<std::size_t>(dir);
        if (!crossing.contains(key))
            crossing.emplace(key, refine_edge(family, node(i, j), at(i, j).p, node(i2, j2), at(i2, j2).p, tol, options));
        return key;
    };

    std::vector<Polyline> out;
    auto isolated_zeros = [&] {
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i)
                if (sign_of(at(i, j).p) == 0 && !crossing.contains(4 * (j * nx + i) + 2))
                    out.push_back({{node(i, j), at(i, j).p}});
    };

    if (nx == 1 || ny == 1) {
        const int dir = nx == 1 ? 1 : 0;
        const std::size_t n = std::max(nx, ny);
        std::optional<std::size_t> last;
        for (std::size_t k = 0; k + 1 < n; ++k)
            if (const auto key = dir == 0 ? edge(k, 0, 0) : edge(0, k, 1); key && key != last) {
                out.push_back({crossing.at(*key)});
                last = key;
            }
        isolated_zeros();
        return out;
    }

    std::map<std::size_t, std::vector<std::size_t>> links;
    auto link = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        links[a].push_back(b);
        links[b].push_back(a);
    };
    for (std::size_t j = 0; j + 1 < ny; ++j)
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const auto bottom = edge(i, j, 0), top = edge(i, j + 1, 0);
            const auto left = edge(i, j, 1), right = edge(i + 1, j, 1);
            std::vector<std::size_t> hits;
            for (const auto& e : {bottom, right, top, left})
                if (e) hits.push_back(*e);
            hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
            if (hits.size() > 1 && hits.front() == hits.back()) hits.pop_back();
            if (hits.size() == 2 || hits.size() == 3) {
                for (std::size_t q = 0; q + 1 < hits.size(); ++q) link(hits[q], hits[q + 1]);
            } else if (hits.size() == 4) {
                const Complex c = 0.5 * (node(i, j) + node(i + 1, j + 1));
                const int sc = sign_of(evaluate_node(family, c, tol, options).p);
                if (sc == sign_of(at(i, j).p)) {
                    link(*bottom, *right);
                    link(*top, *left);
                } else {
                    link(*bottom, *left);
                    link(*top, *right);
                }
            }
        }

    std::set<std::size_t> seen;
    auto walk = [&](std::size_t start) {
        Polyline line;
        std::size_t prev = start, cur = start;
        while (true) {
            seen.insert(cur);
            line.push_back(crossing.at(cur));
            std::optional<std::size_t> next;
            for (const std::size_t n : links[cur])
                if (!seen.contains(n) && n != prev) {
                    next = n;
                    break;
                }
            if (!next) {
                // close a loop back to the start
                if (line.size() > 2 && std::ranges::find(links[cur], start) != links[cur].end()) line.push_back(line.front());
                break;
            }
            prev = cur;
            cur = *next;
        }
        out.push_back(std::move(line));
    };
    for (const auto& [id, adj] : links)
        if (adj.size() == 1 && !seen.contains(id)) walk(id);
    for (const auto& [id, adj] : links)
        if (!seen.contains(id)) walk(id);
    for (const auto& [id, v] : crossing)
        if (!links.contains(id)) out.push_back({v});
    isolated_zeros();
    return out;
}

std::vector<SmoothnessFlag> smoothness_probe(const std::vector<SweepRecord>& records, double tol, double jump_factor) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < records.size(); ++k)
        if (!records[k].error) idx.push_back(k);
    if (idx.size() < 5) throw Error(ErrorCode::PathTooShort, "smoothness probe needs at least 5 valid records");

    const std::size_t n = idx.size();
    std::vector<double> x(n, 0.0), h(n);
    for (std::size_t k = 0; k < n; ++k) {
        h[k] = records[idx[k]].h.mid();
        if (k > 0) x[k] = x[k - 1] + std::abs(records[idx[k]].gamma - records[idx[k - 1]].gamma);
    }
    std::vector<double> d2(n, 0.0), floor(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double left = x[k] - x[k - 1], right = x[k + 1] - x[k];
        d2[k] = 2.0 * ((h[k + 1] - h[k]) / right - (h[k] - h[k - 1]) / left) / (left + right);
        const double step = std::min(left, right);
        floor[k] = 10.0 * 4.0 * tol / (step * step);
    }

    std::map<std::size_t, std::string> flagged;
    auto flag = [&](std::size_t k, const std::string& why) {
        auto& r = flagged[k];
        r += r.empty() ? why : "; " + why;
    };
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double mag = std::abs(d2[k]);
        if (mag <= floor[k]) continue;
        double neighbour = 0.0;
        if (k > 1) neighbour = std::max(neighbour, std::abs(d2[k - 1]));
        if (k + 2 < n) neighbour = std::max(neighbour, std::abs(d2[k + 1]));
        if (mag > jump_factor * neighbour) flag(k, "second difference jump");
    }
    auto plateau = [&](std::size_t k) {
        const auto& r = records[idx[k]];
        return r.h.lo() <= r.theta.hi() + tol;
    };
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (plateau(k) && !plateau(k + 1)) flag(k, "plateau to rise");
        if (!plateau(k) && plateau(k + 1)) flag(k + 1, "rise to plateau");
    }
    std::vector<SmoothnessFlag> out;
    for (const auto& [k, why] : flagged) out.push_back({idx[k], records[idx[k]].gamma, why});
    return out;
}

} // namespace ifslab
