#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "mwdep.hpp"

using namespace mwdep;

namespace {

constexpr int kExitDegenerate = 2;
constexpr int kExitResource = 3;

struct Options {
    std::string curve_file;
    u64 prime_bound = 500;
    double tol = 1e-6;
    u64 l = 2;
    bool json = false;
    u64 cap = 1'000'000;
    bool list_places = false;
};

std::vector<std::string> names(const std::string& csv) {
    std::vector<std::string> out;
    for (auto& s : detail::split(csv, ','))
        if (!s.empty()) out.push_back(s);
    return out;
}

std::vector<ProductPoint<Rational>> lookup(const CurveFile& f, const std::string& csv) {
    std::vector<ProductPoint<Rational>> out;
    for (auto& n : names(csv)) out.push_back(f.point(n));
    return out;
}

std::vector<CurvePoint<Rational>> lookup_single(const CurveFile& f, const std::string& csv) {
    if (f.ambient.size() != 1) throw InvalidArgument("this command works on a single curve");
    std::vector<CurvePoint<Rational>> out;
    for (auto& p : lookup(f, csv)) out.push_back(p[0]);
    return out;
}

TorusPoint parse_torus_point(const std::string& s) {
    TorusPoint out;
    for (auto& x : detail::split(s, ',')) out.push_back(parse_rational(x));
    return out;
}

std::string torus_text(const TorusPoint& t) {
    std::string s = "(";
    for (std::size_t k = 0; k < t.size(); ++k) s += (k ? ", " : "") + to_string(t[k]);
    return s + ")";
}

void print_report(const EvidenceReport& rep, const Options& o) {
    if (o.json) {
        std::cout << to_json(rep).dump(2) << "\n";
        return;
    }
    std::cout << rep.instance << "\n"
              << "verdict: " << verdict_name(rep.verdict) << "\n"
              << "places: " << rep.places.size() << " (member " << rep.count(PlaceRecord::Status::member)
              << ", non-member " << rep.count(PlaceRecord::Status::non_member) << ", skipped "
              << rep.count(PlaceRecord::Status::skipped) << ")\n"
              << "first witness prime: "
              << (rep.first_witness_prime ? std::to_string(*rep.first_witness_prime) : std::string("none")) << "\n";
    if (rep.certificate.contains("method")) std::cout << "certificate: " << rep.certificate["method"].get<std::string>() << "\n";
    if (!rep.consistent) std::cout << "WARNING: exact verdict contradicted by a reduction witness\n";
    if (!o.list_places) return;
    for (auto& r : rep.places) {
        std::cout << "  " << to_string(r.place) << ": " << status_name(r.status);
        if (!r.witness.empty()) {
            std::cout << " [";
            for (std::size_t k = 0; k < r.witness.size(); ++k) std::cout << (k ? ", " : "") << r.witness[k];
            std::cout << "]";
        }
        if (!r.note.empty()) std::cout << " " << r.note;
        std::cout << "\n";
    }
}

void print_search(const PlaceSearch& s, const Options& o) {
    if (o.json) {
        nlohmann::json places = nlohmann::json::array();
        for (auto& v : s.places) places.push_back(to_json(v));
        std::cout << nlohmann::json{{"places", places}, {"density", to_json(s.density)}}.dump(2) << "\n";
        return;
    }
    std::cout << s.density.condition << "\n"
              << "satisfying " << s.density.satisfying << " of " << s.density.tested << " places (ratio "
              << s.density.ratio() << ")\n";
    std::size_t shown = 0;
    for (auto& v : s.places) {
        if (shown++ == 20) {
            std::cout << " ...";
            break;
        }
        std::cout << " " << v.p;
    }
    std::cout << "\n";
}

// A verdict resting on the scan alone is undecided if a capped place could hide a witness.
int scan_exit(const EvidenceReport& rep) {
    if (!rep.first_witness_prime && rep.count(PlaceRecord::Status::skipped) > 0) {
        std::cerr << "resource cap: " << rep.count(PlaceRecord::Status::skipped)
                  << " places skipped without a witness elsewhere; the scan is inconclusive\n";
        return kExitResource;
    }
    return 0;
}

u64 torsion_bound(const ProductCurve<Rational>& amb) {
    BigInt c = 1;
    for (auto& e : amb) c = lcm(c, BigInt(torsion_order_estimate(e, 8)));
    return c.convert_to<u64>();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear dependence of points on elliptic curves and their products via reduction maps"};
    app.require_subcommand(1);
    Options o;
    auto common = [&o](CLI::App* sub, bool needs_curve) {
        auto* cf = sub->add_option("--curve-file", o.curve_file, "curve file (see samples/)");
        if (needs_curve) cf->required()->check(CLI::ExistingFile);
        sub->add_option("--prime-bound", o.prime_bound, "largest prime to scan")->capture_default_str();
        sub->add_option("--tol", o.tol, "height tolerance")->capture_default_str();
        sub->add_option("--l", o.l, "prime l for the l-primary searches")->capture_default_str();
        sub->add_flag("--json", o.json, "machine-readable report");
        sub->add_option("--cap", o.cap, "subgroup enumeration cap per place")->capture_default_str();
        sub->add_flag("--places", o.list_places, "print the outcome at every place");
    };

    std::string point = "P", lambda, basis, target = "T", q1 = "Q1", q2 = "Q2", ring = "integers";
    std::string points_csv = "Q1";
    u64 torsion = 0, m_bound = 12;
    int m_exp = 1;

    auto* detect_cmd = app.add_subcommand("detect", "exact membership P in Lambda from heights, with a reduction scan");
    common(detect_cmd, true);
    detect_cmd->add_option("--point", point, "target point name")->capture_default_str();
    detect_cmd->add_option("--lambda", lambda, "comma-separated generator names")->required();
    detect_cmd->add_option("--basis", basis, "comma-separated names spanning c.A(Q)")->required();
    detect_cmd->add_option("--torsion-order", torsion, "c; 0 estimates it from point counts")->capture_default_str();

    auto* scan_cmd = app.add_subcommand("scan", "test r_v(P) in r_v(Lambda) at every good place");
    common(scan_cmd, true);
    scan_cmd->add_option("--point", point, "target point name")->capture_default_str();
    scan_cmd->add_option("--lambda", lambda, "comma-separated generator names")->required();
    scan_cmd->add_option("--ring", ring, "span over integers or gaussian (E_d factors only)")
        ->check(CLI::IsMember({"integers", "gaussian"}))
        ->capture_default_str();

    auto* prop62_cmd = app.add_subcommand("prop62", "CM counterexample on E_d x E_d over Q(i)");
    common(prop62_cmd, true);
    prop62_cmd->add_option("--q1", q1, "first point name")->capture_default_str();
    prop62_cmd->add_option("--q2", q2, "second point name")->capture_default_str();

    auto* remark79_cmd = app.add_subcommand("remark79", "P = nP', Lambda = <nQ'> vanishing at every good p <= M");
    common(remark79_cmd, true);
    remark79_cmd->add_option("--p-prime", q1, "P' name")->capture_default_str();
    remark79_cmd->add_option("--q-prime", q2, "Q' name")->capture_default_str();
    remark79_cmd->add_option("-M,--M", m_bound, "S_M bound")->capture_default_str();

    auto* d33_cmd = app.add_subcommand("density33", "places where the l-primary part of each r_v(Q) vanishes");
    common(d33_cmd, true);
    d33_cmd->add_option("--points", points_csv, "comma-separated point names")->capture_default_str();

    auto* d36_cmd = app.add_subcommand("density36", "places where the l-primary part of r_v(P) equals r_v(T)");
    common(d36_cmd, true);
    d36_cmd->add_option("--points", points_csv, "comma-separated point names")->capture_default_str();
    d36_cmd->add_option("--targets", target, "comma-separated l^m-torsion names, one per point")->capture_default_str();
    d36_cmd->add_option("--m", m_exp, "targets are l^m-torsion")->capture_default_str();

    std::string beta, gens;
    bool search = false;
    int trials = 200;
    auto* torus_cmd = app.add_subcommand("torus", "local-global membership on G_m and G_m^2");
    common(torus_cmd, false);
    torus_cmd->add_option("--beta", beta, "target, e.g. 4 or 1,2");
    torus_cmd->add_option("--gens", gens, "generators separated by ';', coordinates by ','");
    torus_cmd->add_flag("--search", search, "search rank-2 instances that are local but not global members");
    torus_cmd->add_option("--trials", trials, "random instances tried by --search")->capture_default_str();

    auto* heights_cmd = app.add_subcommand("heights", "canonical heights and the height Gram matrix");
    common(heights_cmd, true);
    std::string gram_csv;
    heights_cmd->add_option("--gram", gram_csv, "comma-separated names for the Gram matrix");

    CLI11_PARSE(app, argc, argv);

    try {
        const long double tol = o.tol;
        std::optional<CurveFile> f;
        if (!o.curve_file.empty()) f = read_curve_file(o.curve_file);

        if (*detect_cmd) {
            LambdaSpec<Rational> lam{f->ambient, lookup(*f, lambda), Ring::integers};
            const u64 c = torsion ? torsion : torsion_bound(f->ambient);
            auto rep = detect(f->point(point), lam, lookup(*f, basis), static_cast<i64>(c), o.prime_bound, tol, o.cap);
            print_report(rep, o);
            return 0;
        }
        if (*scan_cmd) {
            if (ring == "gaussian") {
                ProductCurve<QiElement> amb;
                for (auto& e : f->ambient) {
                    if (!e.cm_d) throw InvalidArgument("gaussian spans need E_d factors");
                    amb.push_back(curve_ed_gaussian(*e.cm_d));
                }
                auto lift = [](const ProductPoint<Rational>& p) {
                    ProductPoint<QiElement> q;
                    for (auto& c : p) q.push_back(lift_to_gaussian(c));
                    return q;
                };
                LambdaSpec<QiElement> lam{amb, {}, Ring::gaussian};
                for (auto& g : lookup(*f, lambda)) lam.generators.push_back(lift(g));
                auto rep = scan(lift(f->point(point)), lam, o.prime_bound, o.cap);
                print_report(rep, o);
                return scan_exit(rep);
            }
            LambdaSpec<Rational> lam{f->ambient, lookup(*f, lambda), Ring::integers};
            auto rep = scan(f->point(point), lam, o.prime_bound, o.cap);
            print_report(rep, o);
            return scan_exit(rep);
        }
        if (*prop62_cmd) {
            if (f->ambient.size() != 1 || !f->ambient[0].cm_d) throw InvalidArgument("prop62 needs a single curve d=<int>");
            auto rep = prop62_harness(*f->ambient[0].cm_d, f->point(q1)[0], f->point(q2)[0], o.prime_bound, tol);
            print_report(rep, o);
            return 0;
        }
        if (*remark79_cmd) {
            auto pts = lookup_single(*f, q1 + "," + q2);
            auto r = remark79_construct(f->ambient[0], pts[0], pts[1], m_bound, o.prime_bound, tol, o.cap);
            if (!o.json) std::cout << "n = " << to_string(r.n) << "\n";
            print_report(r.report, o);
            return 0;
        }
        if (*d33_cmd) {
            print_search(theorem33_search(f->ambient.at(0), lookup_single(*f, points_csv), o.l, o.prime_bound), o);
            return 0;
        }
        if (*d36_cmd) {
            auto s = theorem36_search(f->ambient.at(0), lookup_single(*f, points_csv), lookup_single(*f, target), o.l,
                                      m_exp, o.prime_bound);
            print_search(s, o);
            return 0;
        }
        if (*torus_cmd) {
            if (search) {
                auto found = torus_counterexample_search(o.prime_bound, trials);
                nlohmann::json out = nlohmann::json::array();
                for (auto& c : found) {
                    std::vector<std::string> g;
                    for (auto& x : c.instance.gens) g.push_back(torus_text(x));
                    out.push_back({{"beta", torus_text(c.instance.beta)}, {"gens", g}, {"places_checked", c.places_checked}});
                }
                if (o.json) {
                    std::cout << out.dump(2) << "\n";
                } else {
                    std::cout << found.size() << " instances are members at every good p <= " << o.prime_bound
                              << " but not globally\n";
                    for (auto& e : out) {
                        std::cout << "  beta " << e["beta"].get<std::string>() << " gens";
                        for (auto& g : e["gens"]) std::cout << " " << g.get<std::string>();
                        std::cout << "\n";
                    }
                }
                return 0;
            }
            if (beta.empty() || gens.empty()) throw InvalidArgument("torus needs --beta and --gens (or --search)");
            TorusInstance t{parse_torus_point(beta), {}};
            for (auto& g : detail::split(gens, ';')) t.gens.push_back(parse_torus_point(g));
            if (t.rank() > 2) throw Unsupported("torus rank must be 1 or 2");
            auto rep = torus_scan(t, o.prime_bound);
            auto global = torus_global_membership(t);
            rep.certificate["global_member"] = global.has_value();
            if (global) {
                std::vector<std::string> k;
                for (auto& x : *global) k.push_back(to_string(x));
                rep.certificate["global_exponents"] = k;
            }
            print_report(rep, o);
            if (!o.json) std::cout << "global member: " << (global ? "yes" : "no") << "\n";
            return 0;
        }
        if (*heights_cmd) {
            nlohmann::json out{{"points", nlohmann::json::array()}};
            for (auto& [name, p] : f->points) {
                long double h = 0, err = 0;
                for (std::size_t k = 0; k < p.size(); ++k) {
                    HeightValue v = canonical_height(f->ambient[k], p[k], tol / static_cast<long double>(p.size()));
                    h += v.value;
                    err += v.error;
                }
                out["points"].push_back({{"name", name}, {"height", static_cast<double>(h)}, {"error", static_cast<double>(err)}});
            }
            if (!gram_csv.empty()) {
                HeightGram g = height_gram(f->ambient, lookup(*f, gram_csv), tol);
                out["gram"] = detail::gram_json(g);
            }
            if (o.json) {
                std::cout << out.dump(2) << "\n";
                return 0;
            }
            std::cout << std::setprecision(12);
            for (auto& e : out["points"])
                std::cout << e["name"].get<std::string>() << ": h = " << e["height"].get<double>() << " +- "
                          << e["error"].get<double>() << "\n";
            if (out.contains("gram")) {
                std::cout << "gram:\n";
                for (auto& row : out["gram"]["matrix"]) {
                    for (auto& x : row) std::cout << "  " << x.get<double>();
                    std::cout << "\n";
                }
                std::cout << "det = " << out["gram"]["determinant"].get<double>() << " +- "
                          << out["gram"]["determinant_error"].get<double>()
                          << ", lambda_min >= " << out["gram"]["lambda_min_lower"].get<double>() << "\n";
            }
            return 0;
        }
    } catch (const DegenerateInput& e) {
        std::cerr << "degenerate input: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const DegenerateBasis& e) {
        std::cerr << "degenerate input: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const ResourceLimit& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResource;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
