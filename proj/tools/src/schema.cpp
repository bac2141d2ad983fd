#include "newtonosc_cli/schema.hpp"

#include <functional>
#include <regex>

namespace newtonosc::cli {

namespace {

enum class T { Int, Num, Str, Bool, Arr, Obj, Rat, NumOrStr, IntOrNull };

class Checker {
public:
    explicit Checker(std::vector<std::string>& errors) : errors_(errors) {}

    bool field(const json& obj, const std::string& path, const std::string& key, T type) {
        if (!obj.is_object() || !obj.contains(key)) {
            errors_.push_back(path + "." + key + ": missing");
            return false;
        }
        return is(obj.at(key), path + "." + key, type);
    }

    bool is(const json& v, const std::string& path, T type) {
        static const std::regex rational(R"(-?\d+(/\d+)?)");
        bool ok = false;
        switch (type) {
            case T::Int: ok = v.is_number_integer(); break;
            case T::Num: ok = v.is_number(); break;
            case T::Str: ok = v.is_string(); break;
            case T::Bool: ok = v.is_boolean(); break;
            case T::Arr: ok = v.is_array(); break;
            case T::Obj: ok = v.is_object(); break;
            case T::Rat: ok = v.is_string() && std::regex_match(v.get<std::string>(), rational); break;
            case T::NumOrStr: ok = v.is_number() || v.is_string(); break;
            case T::IntOrNull: ok = v.is_number_integer() || v.is_null(); break;
        }
        if (!ok) errors_.push_back(path + ": wrong type");
        return ok;
    }

    void each(const json& obj, const std::string& path, const std::string& key,
              const std::function<void(const json&, const std::string&)>& body) {
        if (!field(obj, path, key, T::Arr)) return;
        const json& arr = obj.at(key);
        for (std::size_t i = 0; i < arr.size(); ++i) body(arr[i], path + "." + key + "[" + std::to_string(i) + "]");
    }

    void fail(const std::string& message) { errors_.push_back(message); }

private:
    std::vector<std::string>& errors_;
};

void polygon(Checker& c, const json& p, const std::string& at) {
    c.field(p, at, "A", T::Int);
    c.field(p, at, "B", T::Int);
    c.each(p, at, "vertices", [&](const json& v, const std::string& vp) {
        if (c.is(v, vp, T::Arr) && v.size() != 2) c.fail(vp + ": expected an (a, b) pair");
    });
    c.each(p, at, "edges", [&](const json& e, const std::string& ep) {
        c.field(e, ep, "gamma", T::Rat);
        c.field(e, ep, "n", T::Int);
        c.field(e, ep, "upper", T::Arr);
        c.field(e, ep, "lower", T::Arr);
    });
}

void degeneracy(Checker& c, const json& d, const std::string& at) {
    c.field(d, at, "kind", T::Str);
}

void sample(Checker& c, const json& s, const std::string& at) {
    c.field(s, at, "lambda", T::NumOrStr);
    c.field(s, at, "n", T::Int);
    c.field(s, at, "norm", T::NumOrStr);
    c.field(s, at, "conv_err", T::NumOrStr);
    c.field(s, at, "iterations", T::Int);
    c.field(s, at, "converged", T::Bool);
    c.field(s, at, "valid", T::Bool);
}

void analyze(Checker& c, const json& d) {
    c.field(d, "$", "input", T::Obj);
    if (c.field(d, "$", "polygon", T::Obj)) polygon(c, d.at("polygon"), "$.polygon");
    c.field(d, "$", "delta", T::Rat);
    c.field(d, "$", "t0", T::Rat);
    c.field(d, "$", "crossing", T::Str);
    c.each(d, "$", "edge_rates", [&](const json& e, const std::string& p) {
        c.field(e, p, "nu", T::Int);
        c.field(e, p, "gamma", T::Rat);
        c.field(e, p, "delta_nu", T::Rat);
        c.field(e, p, "t_nu", T::Rat);
    });
    if (c.field(d, "$", "branches", T::Obj)) {
        c.each(d.at("branches"), "$.branches", "branches", [&](const json& b, const std::string& p) {
            c.field(b, p, "multiplicity", T::Int);
            c.field(b, p, "ramification", T::Int);
            c.field(b, p, "reality", T::Str);
            c.field(b, p, "status", T::Str);
            c.each(b, p, "terms", [&](const json& t, const std::string& tp) {
                c.field(t, tp, "exponent", T::Rat);
                c.field(t, tp, "re", T::NumOrStr);
                c.field(t, tp, "im", T::NumOrStr);
            });
        });
    }
    if (c.field(d, "$", "degeneracy", T::Obj)) degeneracy(c, d.at("degeneracy"), "$.degeneracy");
}

void norm(Checker& c, const json& d) {
    c.field(d, "$", "input", T::Obj);
    c.each(d, "$", "samples", [&](const json& s, const std::string& p) { sample(c, s, p); });
}

void sweep(Checker& c, const json& d) {
    c.field(d, "$", "input", T::Obj);
    if (!c.field(d, "$", "report", T::Obj)) return;
    const json& r = d.at("report");
    c.field(r, "$.report", "delta", T::Rat);
    c.field(r, "$.report", "predicted", T::Rat);
    c.field(r, "$.report", "slope", T::NumOrStr);
    c.field(r, "$.report", "stderr", T::NumOrStr);
    c.field(r, "$.report", "verdict", T::Str);
    c.field(r, "$.report", "fitted", T::Bool);
    if (c.field(r, "$.report", "degeneracy", T::Obj)) degeneracy(c, r.at("degeneracy"), "$.report.degeneracy");
    c.each(r, "$.report", "samples", [&](const json& s, const std::string& p) { sample(c, s, p); });
}

void blocks(Checker& c, const json& d) {
    c.field(d, "$", "input", T::Obj);
    if (!c.field(d, "$", "report", T::Obj)) return;
    const json& r = d.at("report");
    c.field(r, "$.report", "worst_gap_ratio", T::NumOrStr);
    c.field(r, "$.report", "pass", T::Bool);
    c.field(r, "$.report", "regions", T::Arr);
    c.each(r, "$.report", "blocks", [&](const json& b, const std::string& p) {
        c.field(b, p, "j", T::Int);
        c.field(b, p, "k", T::Int);
        c.field(b, p, "region", T::Str);
        for (const char* key : {"mu", "measured", "size_bound", "osc_bound", "ratio"}) c.field(b, p, key, T::NumOrStr);
    });
}

void dyadpol(Checker& c, const json& d) {
    if (c.field(d, "$", "profile", T::Obj)) {
        c.field(d.at("profile"), "$.profile", "r", T::Arr);
        c.field(d.at("profile"), "$.profile", "C", T::Num);
    }
    if (c.field(d, "$", "set", T::Obj)) {
        const json& e = d.at("set");
        c.field(e, "$.set", "B", T::NumOrStr);
        c.field(e, "$.set", "margin", T::Int);
        c.each(e, "$.set", "corners", [&](const json& v, const std::string& p) { c.is(v, p, T::Rat); });
        c.each(e, "$.set", "intervals", [&](const json& iv, const std::string& p) {
            c.field(iv, p, "lo", T::IntOrNull);
            c.field(iv, p, "hi", T::Int);
        });
    }
    c.field(d, "$", "structure_violations", T::Arr);
    if (c.field(d, "$", "result", T::Obj)) {
        c.field(d.at("result"), "$.result", "violations", T::Int);
        c.field(d.at("result"), "$.result", "min_observed", T::NumOrStr);
        c.field(d.at("result"), "$.result", "pass", T::Bool);
    }
    c.field(d, "$", "trials", T::Int);
    c.field(d, "$", "pass", T::Bool);
}

void selftest(Checker& c, const json& d) {
    c.each(d, "$", "cases", [&](const json& s, const std::string& p) {
        c.field(s, p, "name", T::Str);
        c.field(s, p, "pass", T::Bool);
    });
    c.field(d, "$", "pass", T::Bool);
}

}  // namespace

std::vector<std::string> validate_document(const json& doc) {
    std::vector<std::string> errors;
    Checker c(errors);
    if (!doc.is_object()) return {"$: not an object"};
    if (c.field(doc, "$", "schema", T::Str) && doc.at("schema") != kSchema) errors.push_back("$.schema: unknown version");
    if (c.field(doc, "$", "provenance", T::Obj)) {
        c.field(doc.at("provenance"), "$.provenance", "threads", T::Int);
        c.field(doc.at("provenance"), "$.provenance", "seed", T::Int);
    }
    if (!c.field(doc, "$", "command", T::Str)) return errors;
    const std::string cmd = doc.at("command");
    if (cmd == "analyze") analyze(c, doc);
    else if (cmd == "norm") norm(c, doc);
    else if (cmd == "sweep") sweep(c, doc);
    else if (cmd == "blocks") blocks(c, doc);
    else if (cmd == "dyadpol") dyadpol(c, doc);
    else if (cmd == "selftest") selftest(c, doc);
    else errors.push_back("$.command: unknown command " + cmd);
    return errors;
}

}  // namespace newtonosc::cli
