// Command-line frontend: digit-set and wNAF inspection, Matveev bound and
// Baker-Davenport reduction, rectangle search, certification and certificate
// verification.

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "wnafcert/certify.hpp"
#include "wnafcert/diophantine.hpp"
#include "wnafcert/json_io.hpp"
#include "wnafcert/rectangle.hpp"

using namespace wnafcert;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitResourceCap = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitVerification = 4;

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw Error("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

Integer parse_integer_arg(const std::string& s) {
    try {
        return Integer(s);
    } catch (const std::invalid_argument&) {
        throw CLI::ValidationError("expected an integer, got '" + s + "'");
    }
}

int cmd_digitset(long q, int p, long w, bool json, const RunConfig& cfg) {
    Params params(q, p);
    Integer q_w;
    mpz_ui_pow_ui(q_w.get_mpz_t(), static_cast<unsigned long>(q),
                  static_cast<unsigned long>(w));
    if (q_w > cfg.digit_set_cap) {
        std::cerr << "digit set has " << q_w << " residue classes, above the cap "
                  << cfg.digit_set_cap << " (raise with --digit-cap)\n";
        return kExitResourceCap;
    }
    DigitSet ds = build_digit_set(params, w);
    Output out(cfg.output_path);
    if (json) {
        Json doc;
        doc["q"] = q;
        doc["p"] = p;
        doc["w"] = w;
        Json arr = Json::array();
        for (auto& [key, d] : ds.digits())
            arr.push_back(Json::array({d.a().get_str(), d.b().get_str()}));
        doc["digits"] = arr;
        doc["count"] = ds.size();
        out.stream() << doc.dump() << "\n";
    } else {
        for (auto& [key, d] : ds.digits()) out.stream() << d << "\n";
        out.stream() << "count: " << ds.size() << " nonzero digits (plus 0)\n";
    }
    return kExitOk;
}

int cmd_wnaf(long q, int p, long w, const std::string& a_str, const std::string& b_str,
             bool json, const RunConfig& cfg) {
    Params params(q, p);
    ZTau z(parse_integer_arg(a_str), parse_integer_arg(b_str), params);
    Expansion e = wnaf(z, w);
    Output out(cfg.output_path);
    if (json) {
        Json doc;
        doc["q"] = q;
        doc["p"] = p;
        doc["w"] = w;
        doc["z"] = Json::array({z.a().get_str(), z.b().get_str()});
        Json arr = Json::array();
        for (const ZTau& d : e.digits)
            arr.push_back(Json::array({d.a().get_str(), d.b().get_str()}));
        doc["digits"] = arr;
        doc["weight"] = weight(e);
        out.stream() << doc.dump() << "\n";
    } else {
        out.stream() << "wNAF of " << z << " (LSD first):\n";
        for (const ZTau& d : e.digits) out.stream() << "  " << d << "\n";
        out.stream() << "weight: " << weight(e) << "\n";
    }
    return kExitOk;
}

int cmd_bound(long q, bool json, const RunConfig& cfg) {
    long long wq = matveev_w_bound(q, cfg);
    Output out(cfg.output_path);
    if (json) {
        Json doc;
        doc["q"] = q;
        doc["chi"] = 9;
        doc["psi"] = 4;
        doc["w_matveev"] = wq;
        out.stream() << doc.dump() << "\n";
    } else {
        out.stream() << "w_" << q << " = " << wq << " (" << static_cast<double>(wq)
                     << ")\n";
    }
    return kExitOk;
}

const char* class_name(const PairClass& cls) {
    switch (cls.tag) {
        case PairClass::Tag::Independent: return "independent";
        case PairClass::Tag::Dependent: return "dependent";
        case PairClass::Tag::AxisSpecial: return "axis-special";
    }
    return "?";
}

int cmd_reduce(long q, int p, bool json, const RunConfig& cfg) {
    Params params(q, p);
    BoundReport rep = reduced_bound(params, cfg);
    Output out(cfg.output_path);
    if (json) {
        Json doc;
        doc["q"] = q;
        doc["p"] = p;
        doc["chi"] = rep.chi;
        doc["psi"] = rep.psi;
        doc["w_matveev"] = rep.w_matveev;
        Json arr = Json::array();
        for (const PairResult& r : rep.pairs) {
            Json row;
            row["a"] = r.a.get_str();
            row["b"] = r.b.get_str();
            row["class"] = class_name(r.cls);
            if (r.cls.tag == PairClass::Tag::Dependent) {
                row["eta"] = r.cls.eta.get_str();
                row["theta"] = r.cls.theta.get_str();
            }
            if (r.w_pair.has_value())
                row["w_pair"] = *r.w_pair;
            else
                row["w_pair"] = nullptr;
            arr.push_back(row);
        }
        doc["pairs"] = arr;
        doc["w_reduced"] = rep.w_reduced;
        doc["all_resolved"] = rep.all_resolved;
        out.stream() << doc.dump() << "\n";
    } else {
        out.stream() << "w_matveev = " << rep.w_matveev << "\n";
        out.stream() << "pairs (a, b, class, w~):\n";
        for (const PairResult& r : rep.pairs) {
            out.stream() << "  (" << r.a << ", " << r.b << ") " << class_name(r.cls);
            if (r.cls.tag == PairClass::Tag::Dependent)
                out.stream() << " eta=" << r.cls.eta << " theta=" << r.cls.theta;
            if (r.w_pair.has_value())
                out.stream() << " -> " << *r.w_pair;
            else
                out.stream() << " -> unresolved";
            out.stream() << "\n";
        }
        out.stream() << "w_reduced = " << rep.w_reduced << "\n";
    }
    return rep.all_resolved ? kExitOk : kExitPrecision;
}

int cmd_rect(long q, int p, long w, bool json, const RunConfig& cfg) {
    Params params(q, p);
    Output out(cfg.output_path);
    bool defined = rectangle_well_defined(params, w);
    if (!defined) {
        if (json) {
            Json doc;
            doc["q"] = q;
            doc["p"] = p;
            doc["w"] = w;
            doc["well_defined"] = false;
            out.stream() << doc.dump() << "\n";
        } else {
            out.stream() << "R_" << w << " is degenerate for q=" << q
                         << " (needs q^w > 16q-4)\n";
        }
        return kExitOk;
    }
    RectangleBounds rb = rect_bounds(params, w);
    auto pt = find_point_in_rectangle(params, w);
    if (json) {
        Json doc;
        doc["q"] = q;
        doc["p"] = p;
        doc["w"] = w;
        doc["well_defined"] = true;
        doc["u_w"] = rb.u_w.get_str();
        doc["v_w"] = rb.v_w.get_str();
        doc["B1"] = rb.B1.get_str();
        doc["B2"] = rb.B2_enclosure(128).str(30);
        doc["B3"] = rb.B3_enclosure(128).str(30);
        if (pt.has_value())
            doc["point"] = Json::array({pt->a().get_str(), pt->b().get_str()});
        else
            doc["point"] = nullptr;
        out.stream() << doc.dump() << "\n";
    } else {
        out.stream() << "u_w = " << rb.u_w << ", v_w = " << rb.v_w << "\n";
        out.stream() << "B1 = " << rb.B1 << "\n";
        out.stream() << "B2 in " << rb.B2_enclosure(128).str(30) << "\n";
        out.stream() << "B3 in " << rb.B3_enclosure(128).str(30) << "\n";
        if (pt.has_value()) {
            auto [a, b] = tau_tau2_coords(*pt);
            out.stream() << "lattice point: " << *pt << " = (" << a << ") tau + (" << b
                         << ") tau^2\n";
        } else {
            out.stream() << "no lattice point with q not dividing a\n";
        }
    }
    return kExitOk;
}

int cmd_certify(long q, int p, long w, bool json, const RunConfig& cfg) {
    Params params(q, p);
    Verdict v = run_single(params, w, cfg);
    Output out(cfg.output_path);
    if (json) {
        out.stream() << verdict_to_json(params, w, v).dump() << "\n";
    } else {
        out.stream() << "q=" << q << " p=" << p << " w=" << w << ": "
                     << verdict_name(v.tag);
        if (v.tag == Verdict::Tag::Unresolved) out.stream() << " (" << v.reason << ")";
        out.stream() << "\n";
        if (v.certificate.has_value()) {
            const Certificate& c = *v.certificate;
            out.stream() << "  z     = " << c.z << "\n";
            out.stream() << "  A     = " << c.A << "  (digit at index " << (w - 1) << ")\n";
            out.stream() << "  B     = " << c.B << "  (digit at index 0)\n";
            out.stream() << "  C     = " << c.C << "  (non-digit quotient)\n";
            out.stream() << "  D     = " << c.D << "\n";
            out.stream() << "  delta = " << c.delta << "\n";
            out.stream() << "  weight 2 expansion vs wNAF weight " << weight(c.wnaf_z)
                         << "\n";
        }
    }
    return kExitOk;
}

int cmd_certify_range(long q_min, long q_max, long w_max, bool json, const RunConfig& cfg) {
    if (q_min < 2 || q_max < q_min || w_max < 2)
        throw CLI::ValidationError("certify-range: need 2 <= q_min <= q_max, w_max >= 2");
    struct Task {
        long q;
        int p;
        long w;
    };
    std::vector<Task> tasks;
    for (long q = q_min; q <= q_max; ++q)
        for (int p : {-1, 1})
            for (long w = 2; w <= w_max; ++w) tasks.push_back({q, p, w});

    std::vector<Verdict> results(tasks.size(),
                                 Verdict{Verdict::Tag::Unresolved, std::nullopt, ""});
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            results[i] = run_single(Params(tasks[i].q, tasks[i].p), tasks[i].w, cfg);
        }
    };
    int jobs = std::max(1, cfg.jobs);
    std::vector<std::thread> threads;
    for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    Output out(cfg.output_path);
    long nonopt = 0, kopt = 0, unresolved = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        Params params(tasks[i].q, tasks[i].p);
        const Verdict& v = results[i];
        switch (v.tag) {
            case Verdict::Tag::NonOptimal: ++nonopt; break;
            case Verdict::Tag::KnownOptimal: ++kopt; break;
            case Verdict::Tag::Unresolved: ++unresolved; break;
        }
        if (json) {
            out.stream() << verdict_to_json(params, tasks[i].w, v).dump() << "\n";
        } else {
            out.stream() << "q=" << tasks[i].q << " p=" << tasks[i].p
                         << " w=" << tasks[i].w << ": " << verdict_name(v.tag) << "\n";
        }
    }
    out.stream() << "summary: " << nonopt << " NonOptimal, " << kopt << " KnownOptimal, "
                 << unresolved << " Unresolved\n";
    return kExitOk;
}

int cmd_verify(const std::string& path, bool json, const RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return kExitUsage;
    }
    Json doc;
    Certificate cert = [&] {
        try {
            in >> doc;
            return certificate_from_json(doc);
        } catch (const std::exception& e) {
            throw Error(std::string("parse: ") + e.what());
        }
    }();
    bool ok = verify_certificate(cert);
    Output out(cfg.output_path);
    if (json) {
        Json res;
        res["verified"] = ok;
        out.stream() << res.dump() << "\n";
    } else if (ok) {
        out.stream() << "certificate verifies: q=" << cert.params.q << " p=" << cert.params.p
                     << " w=" << cert.w << ", weight 2 vs wNAF weight "
                     << weight(cert.wnaf_z) << "\n";
    } else {
        // per-check diagnostics
        Params params = cert.params;
        ZTau tau_w = tau_pow(params, cert.w);
        ZTau tau_w1 = tau_pow(params, cert.w - 1);
        auto report = [&](const char* what, bool good) {
            out.stream() << "  " << (good ? "ok  " : "FAIL") << " " << what << "\n";
        };
        out.stream() << "certificate FAILS verification:\n";
        report("A is a nonzero digit", !cert.A.is_zero() && is_digit_value(cert.A, tau_w));
        report("B is a nonzero digit", !cert.B.is_zero() && is_digit_value(cert.B, tau_w));
        report("D is a nonzero digit", !cert.D.is_zero() && is_digit_value(cert.D, tau_w));
        report("C is not a digit and tau does not divide C",
               !cert.C.is_zero() && !divisible_by_tau(cert.C) &&
                   !is_digit_value(cert.C, tau_w));
        report("tau C = A + delta", ZTau::tau(params) * cert.C == cert.A + cert.delta);
        report("D = B - delta tau^(w-1)", cert.D == cert.B - cert.delta * tau_w1);
        report("z = A tau^(w-1) + B", cert.z == cert.A * tau_w1 + cert.B);
        report("z = C tau^w + D", cert.z == cert.C * tau_pow(params, cert.w) + cert.D);
        report("alt expansion has weight 2 and value z",
               weight(cert.alt_expansion) == 2 && value(cert.alt_expansion) == cert.z);
        report("wNAF expansion is valid with value z",
               is_wnaf(cert.wnaf_z) && value(cert.wnaf_z) == cert.z);
        report("wNAF weight >= 3", weight(cert.wnaf_z) >= 3);
    }
    return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certifies non-minimality of width-w non-adjacent forms to base tau, "
                 "a root of X^2 - pX + q"};
    app.require_subcommand(1);

    RunConfig cfg;
    bool json = false;
    long precision_start = 256, precision_ceiling = 16384;
    std::string digit_cap_str, output;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    app.add_flag("--json", json, "machine-readable JSON output");
    app.add_option("--precision-start", precision_start, "starting precision in bits");
    app.add_option("--precision-ceiling", precision_ceiling, "precision ceiling in bits");
    app.add_option("--digit-cap", digit_cap_str, "largest materializable digit set");
    app.add_option("--jobs", jobs, "parallel workers for batch commands");
    app.add_option("--output", output, "write output to a file instead of stdout");

    long q = 0, w = 0, q_min = 0, q_max = 0, w_max = 0;
    int p = 1;
    std::string a_str, b_str, path;

    CLI::App* sub_digitset = app.add_subcommand("digitset", "print the digit set");
    sub_digitset->add_option("q", q)->required();
    sub_digitset->add_option("p", p)->required();
    sub_digitset->add_option("w", w)->required();

    CLI::App* sub_wnaf = app.add_subcommand("wnaf", "expand a + b tau");
    sub_wnaf->add_option("q", q)->required();
    sub_wnaf->add_option("p", p)->required();
    sub_wnaf->add_option("w", w)->required();
    sub_wnaf->add_option("a", a_str)->required();
    sub_wnaf->add_option("b", b_str)->required();

    CLI::App* sub_bound = app.add_subcommand("bound", "Matveev-type bound w_q");
    sub_bound->add_option("q", q)->required();

    CLI::App* sub_reduce = app.add_subcommand("reduce", "Baker-Davenport reduction");
    sub_reduce->add_option("q", q)->required();
    sub_reduce->add_option("p", p)->required();

    CLI::App* sub_rect = app.add_subcommand("rect", "rectangle bounds and lattice point");
    sub_rect->add_option("q", q)->required();
    sub_rect->add_option("p", p)->required();
    sub_rect->add_option("w", w)->required();

    CLI::App* sub_certify = app.add_subcommand("certify", "certify one (q, p, w)");
    sub_certify->add_option("q", q)->required();
    sub_certify->add_option("p", p)->required();
    sub_certify->add_option("w", w)->required();

    CLI::App* sub_range = app.add_subcommand("certify-range", "certify a parameter range");
    sub_range->add_option("q_min", q_min)->required();
    sub_range->add_option("q_max", q_max)->required();
    sub_range->add_option("w_max", w_max)->required();

    CLI::App* sub_verify = app.add_subcommand("verify", "verify a certificate document");
    sub_verify->add_option("path", path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        cfg.precision_start = precision_start;
        cfg.precision_ceiling = precision_ceiling;
        if (!digit_cap_str.empty()) cfg.digit_set_cap = Integer(digit_cap_str);
        cfg.jobs = jobs;
        cfg.output_path = output;
        cfg.validate();

        if (sub_digitset->parsed()) return cmd_digitset(q, p, w, json, cfg);
        if (sub_wnaf->parsed()) return cmd_wnaf(q, p, w, a_str, b_str, json, cfg);
        if (sub_bound->parsed()) return cmd_bound(q, json, cfg);
        if (sub_reduce->parsed()) return cmd_reduce(q, p, json, cfg);
        if (sub_rect->parsed()) return cmd_rect(q, p, w, json, cfg);
        if (sub_certify->parsed()) return cmd_certify(q, p, w, json, cfg);
        if (sub_range->parsed()) return cmd_certify_range(q_min, q_max, w_max, json, cfg);
        if (sub_verify->parsed()) return cmd_verify(path, json, cfg);
        return kExitUsage;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::string what = e.what();
        if (what.rfind("parse:", 0) == 0) return kExitUsage;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
