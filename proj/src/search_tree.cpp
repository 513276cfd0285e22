#include "mcr/search_tree.hpp"

#include "mcr/errors.hpp"
#include "mcr/util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mcr {

using nlohmann::json;

const Node& SearchTree::node(NodeId id) const {
    if (id >= nodes_.size()) throw unknown_node("no node with id " + std::to_string(id));
    return nodes_[id];
}

Node& SearchTree::node_mut(NodeId id) {
    if (id >= nodes_.size()) throw unknown_node("no node with id " + std::to_string(id));
    return nodes_[id];
}

const SearchTree::EdgeMap& SearchTree::edges(NodeId id) const {
    if (id >= edges_.size()) throw unknown_node("no node with id " + std::to_string(id));
    return edges_[id];
}

NodeId SearchTree::add_root(PromptState state, std::string rendered_prompt) {
    if (!nodes_.empty()) throw duplicate_edge("tree already has a root");
    Node n;
    n.id = 0;
    n.depth = 0;
    n.state = std::move(state);
    n.rendered_prompt = std::move(rendered_prompt);
    nodes_.push_back(std::move(n));
    edges_.emplace_back();
    return 0;
}

NodeId SearchTree::add_node(NodeId parent, const Action& action, PromptState state,
                            std::string rendered_prompt, double prior_p) {
    if (parent >= nodes_.size()) throw unknown_parent("no parent with id " + std::to_string(parent));
    EdgeStats& e = edge(parent, action, prior_p);
    if (!e.children.empty() && action.kind != ActionKind::repeat_prompt)
        throw duplicate_edge("child already exists at (" + std::to_string(parent) + ", " +
                             to_string(action) + ")");
    Node n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.depth = nodes_[parent].depth + 1;
    n.parent = ParentLink{parent, action, static_cast<int>(e.children.size())};
    n.state = std::move(state);
    n.rendered_prompt = std::move(rendered_prompt);
    e.children.push_back(n.id);
    NodeId id = n.id;
    nodes_.push_back(std::move(n));
    edges_.emplace_back();
    return id;
}

void SearchTree::record_answer(NodeId id, Answer answer) {
    node_mut(id).answer = std::move(answer);
}

void SearchTree::record_reward(NodeId id, double reward, bool failed) {
    Node& n = node_mut(id);
    n.reward = reward;
    n.reward_failed = failed;
}

void SearchTree::mark_depth_guard_hit(NodeId id) {
    node_mut(id).depth_guard_hit = true;
}

EdgeStats& SearchTree::edge(NodeId id, const Action& action, double prior_p) {
    if (id >= edges_.size()) throw unknown_node("no node with id " + std::to_string(id));
    auto [it, inserted] = edges_[id].try_emplace(action);
    if (inserted) it->second.prior = prior_p;
    return it->second;
}

const EdgeStats* SearchTree::find_edge(NodeId id, const Action& action) const {
    if (id >= edges_.size()) throw unknown_node("no node with id " + std::to_string(id));
    auto it = edges_[id].find(action);
    return it == edges_[id].end() ? nullptr : &it->second;
}

void SearchTree::increment_visit(NodeId id, const Action& action, double prior_p) {
    edge(id, action, prior_p).visits += 1;
}

bool SearchTree::is_leaf(NodeId id) const {
    for (const auto& [a, e] : edges(id))
        if (!e.children.empty()) return false;
    return true;
}

int SearchTree::total_visits(NodeId id) const {
    int sum = 0;
    for (const auto& [a, e] : edges(id)) sum += e.visits;
    return sum;
}

void SearchTree::backpropagate(NodeId leaf, double reward, double gamma) {
    const Node* cur = &node(leaf);
    const int leaf_depth = cur->depth;
    while (cur->parent) {
        const ParentLink& link = *cur->parent;
        Node& parent = node_mut(link.id);
        auto it = edges_[link.id].find(link.action);
        if (it == edges_[link.id].end())
            throw unknown_node("edge missing on root path during backpropagation");
        it->second.total_value += std::pow(gamma, leaf_depth - parent.depth) * reward;
        cur = &parent;
    }
}

RunMetrics SearchTree::metrics() const {
    if (nodes_.empty()) throw empty_tree("metrics of an empty tree");
    RunMetrics m;
    bool any = false;
    for (const Node& n : nodes_) {
        m.max_depth = std::max(m.max_depth, n.depth);
        if (n.depth_guard_hit) ++m.depth_guard_hits;
        if (n.reward) {
            ++m.prompts_evaluated;
            if (!any || *n.reward > m.best_reward) m.best_reward = *n.reward;
            any = true;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Serialization. Statistics and rewards are encoded as decimal strings with
// 17 significant digits so round trips are bit-exact.

namespace {

json query_to_json(const RootQuery& q) {
    return json{{"kind", to_string(q.kind)},
                {"adsorbate", q.adsorbate},
                {"question_id", q.question_id},
                {"k", q.top_k}};
}

json state_to_json(const PromptState& s) {
    json j{{"include_props", s.include_props},
           {"exclude_props", s.exclude_props},
           {"catalyst_type", s.catalyst_type},
           {"oxide", s.oxide},
           {"query", query_to_json(s.query)}};
    j["relation"] = s.relation_to_prev ? json(to_string(*s.relation_to_prev)) : json(nullptr);
    j["prev_candidates"] = s.prev_candidates ? json(*s.prev_candidates) : json(nullptr);
    return j;
}

json action_to_json(const Action& a) {
    return json{{"kind", to_string(a.kind)}, {"value", a.value}};
}

struct DocReader {
    // Pulls typed fields out of a json object, reporting the document path of
    // whatever is wrong.
    const json& obj;
    std::string where;

    const json& get(const char* key) const {
        if (!obj.is_object()) throw malformed_document(where, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) throw malformed_document(where + "." + key, "missing field");
        return *it;
    }
    std::string str(const char* key) const {
        const json& v = get(key);
        if (!v.is_string()) throw malformed_document(where + "." + key, "expected a string");
        return v.get<std::string>();
    }
    int integer(const char* key) const {
        const json& v = get(key);
        if (!v.is_number_integer()) throw malformed_document(where + "." + key, "expected an integer");
        return v.get<int>();
    }
    bool boolean(const char* key) const {
        const json& v = get(key);
        if (!v.is_boolean()) throw malformed_document(where + "." + key, "expected a boolean");
        return v.get<bool>();
    }
    double decimal(const char* key) const {
        const json& v = get(key);
        if (!v.is_string()) throw malformed_document(where + "." + key, "expected a decimal string");
        try {
            return parse_double17(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw malformed_document(where + "." + key, e.what());
        }
    }
    std::vector<std::string> str_list(const char* key) const {
        const json& v = get(key);
        if (!v.is_array()) throw malformed_document(where + "." + key, "expected an array");
        std::vector<std::string> out;
        for (const auto& item : v) {
            if (!item.is_string())
                throw malformed_document(where + "." + key, "expected an array of strings");
            out.push_back(item.get<std::string>());
        }
        return out;
    }
};

RootQuery query_from_json(const json& j, const std::string& where) {
    DocReader r{j, where};
    RootQuery q;
    try {
        q.kind = query_kind_from_string(r.str("kind"));
    } catch (const error& e) {
        throw malformed_document(where + ".kind", e.what());
    }
    q.adsorbate = r.str("adsorbate");
    q.question_id = r.str("question_id");
    q.top_k = r.integer("k");
    if (q.top_k < 1) throw malformed_document(where + ".k", "k must be positive");
    return q;
}

PromptState state_from_json(const json& j, const std::string& where) {
    DocReader r{j, where};
    PromptState s;
    s.include_props = r.str_list("include_props");
    s.exclude_props = r.str_list("exclude_props");
    s.catalyst_type = r.str("catalyst_type");
    s.oxide = r.boolean("oxide");
    const json& rel = r.get("relation");
    if (!rel.is_null()) {
        if (!rel.is_string()) throw malformed_document(where + ".relation", "expected string or null");
        auto parsed = relation_from_string(rel.get<std::string>());
        if (!parsed) throw malformed_document(where + ".relation", "unknown relation token");
        s.relation_to_prev = *parsed;
    }
    const json& pc = r.get("prev_candidates");
    if (!pc.is_null()) {
        if (!pc.is_array()) throw malformed_document(where + ".prev_candidates", "expected array or null");
        std::vector<std::string> cands;
        for (const auto& c : pc) {
            if (!c.is_string())
                throw malformed_document(where + ".prev_candidates", "expected strings");
            cands.push_back(c.get<std::string>());
        }
        s.prev_candidates = std::move(cands);
    }
    s.query = query_from_json(r.get("query"), where + ".query");
    return s;
}

Action action_from_json(const json& j, const std::string& where) {
    DocReader r{j, where};
    Action a;
    try {
        a.kind = action_kind_from_string(r.str("kind"));
    } catch (const error& e) {
        throw malformed_document(where + ".kind", e.what());
    }
    a.value = r.str("value");
    return a;
}

} // namespace

json SearchTree::to_json() const {
    if (nodes_.empty()) throw empty_tree("cannot serialize an empty tree");
    json nodes = json::array();
    for (const Node& n : nodes_) {
        json jn{{"id", n.id},
                {"depth", n.depth},
                {"state", state_to_json(n.state)},
                {"rendered_prompt", n.rendered_prompt},
                {"reward_failed", n.reward_failed},
                {"depth_guard_hit", n.depth_guard_hit}};
        jn["parent"] = n.parent ? json{{"id", n.parent->id},
                                       {"action", action_to_json(n.parent->action)},
                                       {"occurrence", n.parent->occurrence}}
                                : json(nullptr);
        jn["answer"] = n.answer ? json{{"raw_text", n.answer->raw_text},
                                       {"candidates", n.answer->candidates}}
                                : json(nullptr);
        jn["reward"] = n.reward ? json(format_double17(*n.reward)) : json(nullptr);
        nodes.push_back(std::move(jn));
    }
    json edges = json::array();
    for (NodeId id = 0; id < edges_.size(); ++id) {
        for (const auto& [action, stats] : edges_[id]) {
            edges.push_back(json{{"parent", id},
                                 {"action", action_to_json(action)},
                                 {"visits", stats.visits},
                                 {"total_value", format_double17(stats.total_value)},
                                 {"prior", format_double17(stats.prior)},
                                 {"children", stats.children}});
        }
    }
    return json{{"schema_version", 1}, {"nodes", nodes}, {"edges", edges}};
}

SearchTree SearchTree::from_json(const json& doc) {
    if (!doc.is_object()) throw malformed_document("$", "tree document must be an object");
    DocReader top{doc, "$"};
    if (top.integer("schema_version") != 1)
        throw malformed_document("$.schema_version", "unsupported tree schema version");

    const json& nodes = top.get("nodes");
    if (!nodes.is_array() || nodes.empty())
        throw malformed_document("$.nodes", "expected a non-empty array");

    SearchTree t;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "$.nodes[" + std::to_string(i) + "]";
        DocReader r{nodes[i], where};
        Node n;
        n.id = static_cast<NodeId>(r.integer("id"));
        if (n.id != i) throw malformed_document(where + ".id", "node ids must be dense and ordered");
        n.depth = r.integer("depth");
        n.state = state_from_json(r.get("state"), where + ".state");
        n.rendered_prompt = r.str("rendered_prompt");
        n.reward_failed = r.boolean("reward_failed");
        n.depth_guard_hit = r.boolean("depth_guard_hit");
        const json& parent = r.get("parent");
        if (!parent.is_null()) {
            DocReader pr{parent, where + ".parent"};
            ParentLink link;
            link.id = static_cast<NodeId>(pr.integer("id"));
            if (link.id >= i) throw malformed_document(where + ".parent.id", "parent must precede child");
            link.action = action_from_json(pr.get("action"), where + ".parent.action");
            link.occurrence = pr.integer("occurrence");
            n.parent = link;
            if (n.depth != t.nodes_[link.id].depth + 1)
                throw malformed_document(where + ".depth", "depth must be parent depth + 1");
        } else {
            if (i != 0) throw malformed_document(where + ".parent", "only the root may lack a parent");
            if (n.depth != 0) throw malformed_document(where + ".depth", "root depth must be 0");
        }
        const json& answer = r.get("answer");
        if (!answer.is_null()) {
            DocReader ar{answer, where + ".answer"};
            n.answer = Answer{ar.str("raw_text"), ar.str_list("candidates")};
        }
        const json& reward = r.get("reward");
        if (!reward.is_null()) n.reward = r.decimal("reward");
        t.nodes_.push_back(std::move(n));
        t.edges_.emplace_back();
    }

    const json& edges = top.get("edges");
    if (!edges.is_array()) throw malformed_document("$.edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "$.edges[" + std::to_string(i) + "]";
        DocReader r{edges[i], where};
        NodeId parent = static_cast<NodeId>(r.integer("parent"));
        if (parent >= t.nodes_.size())
            throw malformed_document(where + ".parent", "unknown parent node");
        Action action = action_from_json(r.get("action"), where + ".action");
        EdgeStats stats;
        stats.visits = r.integer("visits");
        stats.total_value = r.decimal("total_value");
        stats.prior = r.decimal("prior");
        const json& children = r.get("children");
        if (!children.is_array()) throw malformed_document(where + ".children", "expected an array");
        for (const auto& c : children) {
            if (!c.is_number_integer())
                throw malformed_document(where + ".children", "expected node ids");
            NodeId child = c.get<NodeId>();
            if (child >= t.nodes_.size())
                throw malformed_document(where + ".children", "unknown child node");
            const auto& link = t.nodes_[child].parent;
            if (!link || link->id != parent || link->action != action)
                throw malformed_document(where + ".children",
                                         "child " + std::to_string(child) + " does not point back");
            stats.children.push_back(child);
        }
        auto [it, inserted] = t.edges_[parent].try_emplace(action, std::move(stats));
        if (!inserted) throw malformed_document(where, "duplicate edge entry");
    }

    // Every non-root node must be reachable through its parent's edge list.
    for (const Node& n : t.nodes_) {
        if (!n.parent) continue;
        const EdgeStats* e = t.find_edge(n.parent->id, n.parent->action);
        if (!e || std::find(e->children.begin(), e->children.end(), n.id) == e->children.end())
            throw malformed_document("$.nodes[" + std::to_string(n.id) + "]",
                                     "node is not listed under its parent edge");
    }
    return t;
}

std::string SearchTree::to_dot() const {
    std::ostringstream out;
    out << "digraph prompt_tree {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n";
    for (const Node& n : nodes_) {
        out << "  n" << n.id << " [label=\"#" << n.id << " d=" << n.depth;
        if (n.reward) out << "\\nR=" << format_double17(*n.reward);
        if (n.reward_failed) out << " (failed)";
        out << "\"];\n";
    }
    for (NodeId id = 0; id < edges_.size(); ++id) {
        for (const auto& [action, stats] : edges_[id]) {
            for (NodeId child : stats.children) {
                std::string label = to_string(action);
                for (char& c : label)
                    if (c == '"') c = '\'';
                out << "  n" << id << " -> n" << child << " [label=\"" << label
                    << "\\nN=" << stats.visits << "\"];\n";
            }
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace mcr
