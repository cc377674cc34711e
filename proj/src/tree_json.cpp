#include "jetcalc/tree_json.hpp"

#include <fstream>
#include <sstream>

namespace jetcalc {

using nlohmann::json;

namespace {

Integer json_integer(const json& v, const std::string& field) {
    if (v.is_number_integer()) return Integer(v.get<long>());
    if (v.is_string()) {
        try {
            return Integer(v.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    throw TreeParseError(field, "expected an integer");
}

Node parse_node(const json& doc, const std::vector<Bundle>& bundles, const std::string& field,
                unsigned remaining) {
    if (!doc.is_object()) throw TreeParseError(field, "expected an object");
    Node node;
    if (doc.contains("degree")) {
        if (doc.contains("children")) throw TreeParseError(field, "a node cannot have both degree and children");
        if (remaining != 0) throw TreeParseError(field, "leaf above full depth (tree depth must be uniform)");
        Integer d = json_integer(doc["degree"], field + ".degree");
        if (d < 1 || !d.fits_slong_p()) throw TreeParseError(field + ".degree", "leaf degree must be a positive integer");
        node.degree = d.get_si();
        return node;
    }
    if (!doc.contains("children") || !doc["children"].is_array() || doc["children"].empty())
        throw TreeParseError(field, "internal node needs a non-empty children array");
    if (remaining == 0) throw TreeParseError(field, "path longer than the declared dimension");
    const auto& children = doc["children"];
    for (std::size_t c = 0; c < children.size(); ++c) {
        const std::string cf = field + ".children[" + std::to_string(c) + "]";
        const json& ch = children[c];
        if (!ch.is_object()) throw TreeParseError(cf, "expected an object");
        Edge e;
        e.numerators.assign(bundles.size(), 0);
        if (ch.contains("markings")) {
            const json& mk = ch["markings"];
            if (!mk.is_object()) throw TreeParseError(cf + ".markings", "expected an object");
            for (auto it = mk.begin(); it != mk.end(); ++it) {
                std::size_t idx = bundles.size();
                for (std::size_t b = 0; b < bundles.size(); ++b)
                    if (bundles[b].label == it.key()) idx = b;
                if (idx == bundles.size())
                    throw TreeParseError(cf + ".markings." + it.key(), "unknown bundle label");
                e.numerators[idx] = json_integer(it.value(), cf + ".markings." + it.key());
            }
        }
        if (!ch.contains("node")) throw TreeParseError(cf + ".node", "missing child node");
        e.node = parse_node(ch["node"], bundles, cf + ".node", remaining - 1);
        node.children.push_back(std::move(e));
    }
    return node;
}

json node_to_json(const Node& node, const std::vector<Bundle>& bundles) {
    if (node.is_leaf()) return json{{"degree", node.degree}};
    json children = json::array();
    for (const auto& e : node.children) {
        json mk = json::object();
        for (std::size_t b = 0; b < bundles.size(); ++b) {
            const Integer& m = e.numerators[b];
            if (m.fits_slong_p()) mk[bundles[b].label] = m.get_si();
            else mk[bundles[b].label] = m.get_str();
        }
        children.push_back(json{{"markings", mk}, {"node", node_to_json(e.node, bundles)}});
    }
    return json{{"children", children}};
}

} // namespace

StratTree tree_from_json(const json& doc) {
    if (!doc.is_object()) throw TreeParseError("$", "expected an object");
    if (!doc.contains("dimension")) throw TreeParseError("dimension", "missing");
    Integer dim = json_integer(doc["dimension"], "dimension");
    if (dim < 0 || dim > 64) throw TreeParseError("dimension", "must be between 0 and 64");
    if (!doc.contains("bundles") || !doc["bundles"].is_array())
        throw TreeParseError("bundles", "expected an array");
    std::vector<Bundle> bundles;
    for (std::size_t i = 0; i < doc["bundles"].size(); ++i) {
        const std::string f = "bundles[" + std::to_string(i) + "]";
        const json& b = doc["bundles"][i];
        if (!b.is_object() || !b.contains("label") || !b["label"].is_string())
            throw TreeParseError(f + ".label", "expected a string label");
        Bundle bundle{b["label"].get<std::string>(), 1};
        if (b.contains("denominator")) bundle.denominator = json_integer(b["denominator"], f + ".denominator");
        if (bundle.denominator < 1) throw TreeParseError(f + ".denominator", "must be >= 1");
        for (const auto& prev : bundles)
            if (prev.label == bundle.label) throw TreeParseError(f + ".label", "duplicate label");
        bundles.push_back(bundle);
    }
    if (!doc.contains("root")) throw TreeParseError("root", "missing");
    const unsigned n = static_cast<unsigned>(dim.get_ui());
    Node root = parse_node(doc["root"], bundles, "root", n);
    return StratTree(n, std::move(bundles), std::move(root));
}

StratTree tree_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw TreeParseError("$", std::string("invalid JSON: ") + e.what());
    }
    return tree_from_json(doc);
}

StratTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TreeParseError("tree", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return tree_from_json_text(ss.str());
}

json tree_to_json(const StratTree& tree) {
    json bundles = json::array();
    for (const auto& b : tree.bundles()) {
        json jb{{"label", b.label}};
        if (b.denominator.fits_slong_p()) jb["denominator"] = b.denominator.get_si();
        else jb["denominator"] = b.denominator.get_str();
        bundles.push_back(jb);
    }
    return json{{"dimension", tree.dimension()},
                {"bundles", bundles},
                {"root", node_to_json(tree.root(), tree.bundles())}};
}

} // namespace jetcalc
