#include "baw/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "baw/finite_ba.hpp"
#include "json.hpp"

namespace baw {

namespace {

using json = nlohmann::ordered_json;

json parse_document(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(origin + ": " + e.what());
    }
}

std::string type_name(const json& j) {
    if (j.is_null()) return "null";
    if (j.is_boolean()) return "a boolean";
    if (j.is_string()) return "a string";
    if (j.is_array()) return "an array";
    if (j.is_object()) return "an object";
    return "a number";
}

// One object being consumed field by field. done() rejects whatever was
// never asked for, so every reader doubles as the unknown-field check.
class ObjReader {
public:
    ObjReader(const json& j, std::string locus) : j_(j), locus_(std::move(locus)) {
        if (!j.is_object())
            throw parse_error(locus_ + " is " + type_name(j) + ", expected an object");
    }

    const std::string& locus() const { return locus_; }

    bool has(const char* key) {
        if (!j_.contains(key)) return false;
        seen_.insert(key);
        return true;
    }

    const json& need(const char* key) {
        if (!j_.contains(key)) throw parse_error(locus_ + " is missing \"" + key + "\"");
        seen_.insert(key);
        return j_.at(key);
    }

    std::string member(const char* key) const { return locus_ + "." + key; }

    void done() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key))
                throw parse_error("unknown field \"" + key + "\" at " + locus_);
    }

private:
    const json& j_;
    std::string locus_;
    std::set<std::string> seen_;
};

std::uint64_t as_u64(const json& j, const std::string& locus) {
    if (!j.is_number_unsigned())
        throw parse_error(locus + " is " + type_name(j) + ", expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::uint64_t u64_field(ObjReader& r, const char* key, std::uint64_t def) {
    if (!r.has(key)) return def;
    return as_u64(r.need(key), r.member(key));
}

bool bool_field(ObjReader& r, const char* key, bool def) {
    if (!r.has(key)) return def;
    const json& j = r.need(key);
    if (!j.is_boolean())
        throw parse_error(r.member(key) + " is " + type_name(j) + ", expected a boolean");
    return j.get<bool>();
}

std::string string_field(ObjReader& r, const char* key, const std::string& def) {
    if (!r.has(key)) return def;
    const json& j = r.need(key);
    if (!j.is_string())
        throw parse_error(r.member(key) + " is " + type_name(j) + ", expected a string");
    return j.get<std::string>();
}

const json& array_at(const json& j, const std::string& locus) {
    if (!j.is_array())
        throw parse_error(locus + " is " + type_name(j) + ", expected an array");
    return j;
}

std::vector<std::uint64_t> u64_list(const json& j, const std::string& locus) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < array_at(j, locus).size(); ++i)
        out.push_back(as_u64(j[i], locus + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::uint32_t> u32_list(const json& j, const std::string& locus) {
    std::vector<std::uint32_t> out;
    for (auto v : u64_list(j, locus)) {
        if (v > std::numeric_limits<std::uint32_t>::max())
            throw parse_error(locus + " holds a value past 2^32");
        out.push_back(static_cast<std::uint32_t>(v));
    }
    return out;
}

std::vector<Ordinal> ordinal_list(const json& j, const std::string& locus) {
    std::vector<Ordinal> out;
    for (std::size_t i = 0; i < array_at(j, locus).size(); ++i) {
        const json& e = j[i];
        std::string spot = locus + "[" + std::to_string(i) + "]";
        if (!e.is_string())
            throw parse_error(spot + " is " + type_name(e) + ", expected an ordinal string");
        try {
            out.push_back(parse_ordinal(e.get<std::string>()));
        } catch (const error& err) {
            throw parse_error(spot + ": " + err.what());
        }
    }
    return out;
}

BasedFamily family_from(const json& doc, const std::string& locus) {
    ObjReader top(doc, locus);
    std::string kind = string_field(top, "kind", "");
    if (kind != "lambda-fixture")
        throw parse_error(top.member("kind") + " is \"" + kind +
                          "\", expected \"lambda-fixture\"");

    BasedFamily f{LambdaSystem({SystemNode{}}), 1, 1, 0, {}, {}};
    f.n_blocks = static_cast<std::size_t>(as_u64(top.need("n_blocks"), top.member("n_blocks")));
    f.block_width = static_cast<std::size_t>(u64_field(top, "block_width", 1));
    f.n_free = static_cast<std::size_t>(u64_field(top, "n_free", 0));
    if (f.n_blocks == 0 || f.block_width == 0)
        throw parse_error(locus + ": n_blocks and block_width must be positive");
    if (top.has("gamma")) f.expected_gamma = u32_list(top.need("gamma"), top.member("gamma"));

    const json& nodes = array_at(top.need("nodes"), top.member("nodes"));
    std::vector<SystemNode> parsed;
    std::set<TreePath> paths;
    std::map<TreePath, std::vector<std::uint64_t>> sets;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        ObjReader nr(nodes[i], top.member("nodes") + "[" + std::to_string(i) + "]");
        SystemNode n;
        n.path = u32_list(nr.need("path"), nr.member("path"));
        n.rank = static_cast<std::uint32_t>(as_u64(nr.need("rank"), nr.member("rank")));
        if (nr.has("children")) n.children = u32_list(nr.need("children"), nr.member("children"));
        n.marked = bool_field(nr, "marked", false);
        if (nr.has("base")) n.base = u64_list(nr.need("base"), nr.member("base"));
        if (nr.has("set")) {
            if (n.rank != 0)
                throw parse_error(nr.member("set") + " is only allowed on rank-0 nodes");
            sets[n.path] = u64_list(nr.need("set"), nr.member("set"));
        } else if (n.rank == 0) {
            throw parse_error(nr.locus() + " is a leaf and needs a \"set\"");
        }
        if (!paths.insert(n.path).second)
            throw parse_error(nr.locus() + " repeats path " + path_str(n.path));
        parsed.push_back(std::move(n));
        nr.done();
    }
    top.done();

    f.system = LambdaSystem(std::move(parsed));
    f.sets = std::move(sets);
    return f;
}

json family_to(const BasedFamily& f) {
    json doc;
    doc["kind"] = "lambda-fixture";
    doc["n_blocks"] = f.n_blocks;
    if (f.block_width != 1) doc["block_width"] = f.block_width;
    if (f.n_free != 0) doc["n_free"] = f.n_free;
    if (!f.expected_gamma.empty()) doc["gamma"] = f.expected_gamma;
    doc["nodes"] = json::array();
    for (const auto& [path, node] : f.system.nodes()) {
        json n;
        n["path"] = path;
        n["rank"] = node.rank;
        if (!node.children.empty()) n["children"] = node.children;
        if (node.marked) n["marked"] = true;
        if (!node.base.empty()) n["base"] = node.base;
        if (auto it = f.sets.find(path); it != f.sets.end()) n["set"] = it->second;
        doc["nodes"].push_back(std::move(n));
    }
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t capacity_exponent() {
    std::size_t cap = max_atoms();
    std::size_t e = 0;
    while ((std::size_t{1} << (e + 1)) <= cap && e < 63) ++e;
    return e;
}

TightCodingRun tight_coding_from(ObjReader& r) {
    TightCodingRun t;
    t.k_max = static_cast<std::uint32_t>(u64_field(r, "k_max", t.k_max));
    t.budget = static_cast<std::size_t>(u64_field(r, "budget", t.budget));
    if (t.k_max == 0) throw parse_error(r.member("k_max") + " must be positive");
    if (t.budget > capacity_exponent())
        throw capacity_error(r.member("budget") + " exceeds the atom capacity, limit " +
                             std::to_string(capacity_exponent()));
    if (r.has("s")) t.s_set = ordinal_list(r.need("s"), r.member("s"));
    if (r.has("s2")) t.s_alt = ordinal_list(r.need("s2"), r.member("s2"));
    if (r.has("scope")) t.scope = ordinal_list(r.need("scope"), r.member("scope"));
    return t;
}

CpPlusRun cp_plus_from(ObjReader& r) {
    CpPlusRun c;
    c.grid.n_rows = static_cast<std::size_t>(u64_field(r, "rows", c.grid.n_rows));
    c.grid.n_cols = static_cast<std::size_t>(u64_field(r, "cols", c.grid.n_cols));
    c.grid.n_free = static_cast<std::size_t>(u64_field(r, "free", c.grid.n_free));
    c.samples = static_cast<std::size_t>(u64_field(r, "samples", c.samples));
    if (c.grid.n_rows == 0 || c.grid.n_cols == 0)
        throw parse_error(r.locus() + ": rows and cols must be positive");
    if (c.grid.n_rows * c.grid.n_cols + c.grid.n_free + 1 > capacity_exponent())
        throw capacity_error(r.locus() + ": grid exceeds the atom capacity, limit 2^" +
                             std::to_string(capacity_exponent()) + " atoms");
    if (r.has("selection")) {
        const json& sel = array_at(r.need("selection"), r.member("selection"));
        for (std::size_t i = 0; i < sel.size(); ++i) {
            ObjReader sr(sel[i], r.member("selection") + "[" + std::to_string(i) + "]");
            RowSpec row;
            row.full = bool_field(sr, "full", false);
            row.prefix = static_cast<std::size_t>(u64_field(sr, "prefix", 0));
            sr.done();
            if (row.full && row.prefix != 0)
                throw parse_error(sr.locus() + " sets both \"full\" and \"prefix\"");
            c.selection.push_back(row);
        }
    }
    return c;
}

BasedFamily family_field(ObjReader& r) {
    bool inline_family = r.has("family");
    bool by_path = r.has("fixture");
    if (inline_family == by_path)
        throw parse_error(r.locus() + " needs exactly one of \"family\" and \"fixture\"");
    if (inline_family) return family_from(r.need("family"), r.member("family"));
    const json& p = r.need("fixture");
    if (!p.is_string())
        throw parse_error(r.member("fixture") + " is " + type_name(p) + ", expected a path");
    return family_from_json_file(p.get<std::string>());
}

LambdaSystemRun lambda_system_from(ObjReader& r) {
    LambdaSystemRun l{family_field(r), 0};
    l.overlap = static_cast<std::size_t>(u64_field(r, "overlap", l.overlap));
    return l;
}

AsConstructionRun as_construction_from(ObjReader& r) {
    AsConstructionRun a{family_field(r), std::nullopt, 3};
    if (r.has("branch"))
        a.branch = static_cast<std::uint32_t>(as_u64(r.need("branch"), r.member("branch")));
    a.samples = static_cast<std::size_t>(u64_field(r, "samples", a.samples));
    return a;
}

TransversalRun transversal_from(ObjReader& r) {
    TransversalRun t;
    if (r.has("sets")) {
        const json& sets = array_at(r.need("sets"), r.member("sets"));
        for (std::size_t i = 0; i < sets.size(); ++i)
            t.sets.push_back(u64_list(sets[i], r.member("sets") + "[" + std::to_string(i) + "]"));
    }
    t.cases = static_cast<std::size_t>(u64_field(r, "cases", t.cases));
    t.max_sets = static_cast<std::size_t>(u64_field(r, "max_sets", t.max_sets));
    t.max_size = static_cast<std::size_t>(u64_field(r, "max_size", t.max_size));
    if (t.sets.empty() && t.cases == 0)
        throw parse_error(r.locus() + " runs nothing: give \"sets\" or a positive \"cases\"");
    if (t.max_sets == 0 || t.max_size == 0)
        throw parse_error(r.locus() + ": max_sets and max_size must be positive");
    return t;
}

json ordinals_to(const std::vector<Ordinal>& os) {
    json a = json::array();
    for (const auto& o : os) a.push_back(o.str());
    return a;
}

} // namespace

BasedFamily family_from_json_text(const std::string& text, const std::string& origin) {
    return family_from(parse_document(text, origin), "$");
}

BasedFamily family_from_json_file(const std::string& path) {
    return family_from(parse_document(read_file(path), path), "$");
}

std::string family_to_json(const BasedFamily& f) {
    return family_to(f).dump(2) + "\n";
}

std::string run_kind_name(RunKind k) {
    switch (k) {
    case RunKind::tight_coding: return "tight-coding";
    case RunKind::cp_plus: return "cp-plus";
    case RunKind::lambda_system: return "lambda-system";
    case RunKind::as_construction: return "as-construction";
    case RunKind::transversal: return "transversal";
    case RunKind::selftest: return "selftest";
    }
    throw usage_error("unhandled run kind");
}

RunSpec parse_spec_text(const std::string& text, const std::string& origin) {
    json doc = parse_document(text, origin);
    ObjReader top(doc, "$");

    RunSpec spec;
    const json& kind = top.need("kind");
    if (!kind.is_string())
        throw parse_error("$.kind is " + type_name(kind) + ", expected a string");
    std::string name = kind.get<std::string>();
    spec.seed = u64_field(top, "seed", 0);
    spec.output = string_field(top, "output", "");

    if (name == "tight-coding") {
        spec.kind = RunKind::tight_coding;
        spec.tight_coding = tight_coding_from(top);
    } else if (name == "cp-plus") {
        spec.kind = RunKind::cp_plus;
        spec.cp_plus = cp_plus_from(top);
    } else if (name == "lambda-system") {
        spec.kind = RunKind::lambda_system;
        spec.lambda_system = lambda_system_from(top);
    } else if (name == "as-construction") {
        spec.kind = RunKind::as_construction;
        spec.as_construction = as_construction_from(top);
    } else if (name == "transversal") {
        spec.kind = RunKind::transversal;
        spec.transversal = transversal_from(top);
    } else if (name == "selftest") {
        spec.kind = RunKind::selftest;
        spec.selftest = SelftestRun{};
    } else {
        throw parse_error("$.kind names no runner: \"" + name + "\"");
    }
    top.done();
    return spec;
}

RunSpec parse_spec_file(const std::string& path) {
    return parse_spec_text(read_file(path), path);
}

std::string spec_to_json(const RunSpec& spec) {
    json doc;
    doc["kind"] = run_kind_name(spec.kind);
    if (spec.seed != 0) doc["seed"] = spec.seed;
    if (!spec.output.empty()) doc["output"] = spec.output;
    switch (spec.kind) {
    case RunKind::tight_coding: {
        const TightCodingRun& t = *spec.tight_coding;
        doc["k_max"] = t.k_max;
        doc["budget"] = t.budget;
        if (!t.s_set.empty()) doc["s"] = ordinals_to(t.s_set);
        if (t.s_alt) doc["s2"] = ordinals_to(*t.s_alt);
        if (!t.scope.empty()) doc["scope"] = ordinals_to(t.scope);
        break;
    }
    case RunKind::cp_plus: {
        const CpPlusRun& c = *spec.cp_plus;
        doc["rows"] = c.grid.n_rows;
        doc["cols"] = c.grid.n_cols;
        doc["free"] = c.grid.n_free;
        doc["samples"] = c.samples;
        if (!c.selection.empty()) {
            doc["selection"] = json::array();
            for (const RowSpec& row : c.selection) {
                json r = json::object();
                if (row.full) r["full"] = true;
                else if (row.prefix != 0) r["prefix"] = row.prefix;
                doc["selection"].push_back(std::move(r));
            }
        }
        break;
    }
    case RunKind::lambda_system: {
        doc["family"] = family_to(spec.lambda_system->family);
        if (spec.lambda_system->overlap != 0) doc["overlap"] = spec.lambda_system->overlap;
        break;
    }
    case RunKind::as_construction: {
        doc["family"] = family_to(spec.as_construction->family);
        if (spec.as_construction->branch) doc["branch"] = *spec.as_construction->branch;
        doc["samples"] = spec.as_construction->samples;
        break;
    }
    case RunKind::transversal: {
        const TransversalRun& t = *spec.transversal;
        if (!t.sets.empty()) doc["sets"] = t.sets;
        if (t.cases != 0) {
            doc["cases"] = t.cases;
            doc["max_sets"] = t.max_sets;
            doc["max_size"] = t.max_size;
        }
        break;
    }
    case RunKind::selftest: break;
    }
    return doc.dump(2) + "\n";
}

} // namespace baw
