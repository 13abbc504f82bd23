#include <algorithm>
#include <cctype>
#include <map>

#include "ncdlab/dendrogram.hpp"
#include "ncdlab/error.hpp"

namespace ncdlab {
namespace {

bool needs_quotes(std::string_view s) {
    if (s.empty()) return true;
    for (unsigned char c : s) {
        if (std::isspace(c) || c == '(' || c == ')' || c == '[' || c == ']' || c == '\'' || c == ':' ||
            c == ';' || c == ',') {
            return true;
        }
    }
    return false;
}

std::string quote_label(const std::string& s) {
    if (!needs_quotes(s)) return s;
    std::string out = "'";
    for (char c : s) {
        out += c;
        if (c == '\'') out += '\'';
    }
    out += '\'';
    return out;
}

struct Rendered {
    std::string min_label;
    std::string text;
};

Rendered render(const Dendrogram& t, Dendrogram::Node v, Dendrogram::Node parent) {
    if (t.is_leaf(v)) return {t.label(v), quote_label(t.label(v))};
    std::vector<Rendered> kids;
    for (auto w : t.neighbors(v)) {
        if (w != parent) kids.push_back(render(t, w, v));
    }
    std::sort(kids.begin(), kids.end(), [](const Rendered& a, const Rendered& b) { return a.min_label < b.min_label; });
    Rendered r{kids.front().min_label, "("};
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) r.text += ',';
        r.text += kids[i].text;
    }
    r.text += ')';
    return r;
}

class NewickReader {
public:
    explicit NewickReader(std::string_view s) : s_(s) {}

    Dendrogram read() {
        skip();
        const int root = subtree();
        skip();
        if (pos_ >= s_.size() || s_[pos_] != ';') fail("expected ';'");
        ++pos_;
        skip();
        if (pos_ != s_.size()) fail("trailing characters after ';'");
        return build(root);
    }

private:
    struct RawNode {
        std::string label;
        std::vector<int> children;
        bool leaf = false;
    };

    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("newick: " + what + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size()) {
            const auto c = static_cast<unsigned char>(s_[pos_]);
            if (std::isspace(c)) {
                ++pos_;
            } else if (c == '[') {
                const auto e = s_.find(']', pos_);
                if (e == std::string_view::npos) fail("unterminated comment");
                pos_ = e + 1;
            } else {
                break;
            }
        }
    }

    std::string label() {
        skip();
        std::string out;
        if (pos_ < s_.size() && s_[pos_] == '\'') {
            ++pos_;
            while (true) {
                if (pos_ >= s_.size()) fail("unterminated quoted label");
                if (s_[pos_] == '\'') {
                    if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
                        out += '\'';
                        pos_ += 2;
                        continue;
                    }
                    ++pos_;
                    break;
                }
                out += s_[pos_++];
            }
            return out;
        }
        while (pos_ < s_.size()) {
            const auto c = static_cast<unsigned char>(s_[pos_]);
            if (std::isspace(c) || c == '(' || c == ')' || c == '[' || c == ']' || c == '\'' || c == ':' ||
                c == ';' || c == ',') {
                break;
            }
            out += s_[pos_++];
        }
        return out;
    }

    void branch_length() {
        skip();
        if (pos_ < s_.size() && s_[pos_] == ':') {
            ++pos_;
            skip();
            const auto b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                        s_[pos_] == '-' || s_[pos_] == '+')) {
                ++pos_;
            }
            if (pos_ == b) fail("empty branch length");
        }
    }

    int subtree() {
        skip();
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            ++pos_;
            while (true) {
                const int child = subtree();
                nodes_[static_cast<std::size_t>(id)].children.push_back(child);
                skip();
                if (pos_ >= s_.size()) fail("unexpected end of input");
                if (s_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                if (s_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ')'");
            }
            label();  // internal labels are ignored
        } else {
            auto l = label();
            if (l.empty()) fail("empty leaf label");
            nodes_[static_cast<std::size_t>(id)].label = std::move(l);
            nodes_[static_cast<std::size_t>(id)].leaf = true;
        }
        branch_length();
        return id;
    }

    // Unrooted edges, with degree-2 nodes (a bifurcating root or a
    // single-child node) suppressed.
    Dendrogram build(int root) {
        std::vector<std::string> labels;
        std::vector<int> leaf_nodes;
        std::vector<std::pair<int, int>> edges;

        // Returns the node that represents `v` towards its parent.
        auto collapse = [&](auto&& self, int v) -> int {
            auto& node = nodes_[static_cast<std::size_t>(v)];
            if (node.leaf) {
                labels.push_back(node.label);
                leaf_nodes.push_back(v);
                return v;
            }
            std::vector<int> reps;
            for (auto c : node.children) reps.push_back(self(self, c));
            if (reps.size() == 1) return reps.front();
            if (reps.size() != 2) {
                throw ValidationError("newick: internal node with " + std::to_string(reps.size()) +
                                      " children; only binary trees are supported");
            }
            for (auto r : reps) edges.emplace_back(v, r);
            return v;
        };

        auto& r = nodes_[static_cast<std::size_t>(root)];
        if (r.leaf) throw ValidationError("newick: tree has a single leaf");
        std::vector<int> reps;
        for (auto c : r.children) reps.push_back(collapse(collapse, c));
        if (reps.size() == 2) {
            edges.emplace_back(reps[0], reps[1]);
        } else if (reps.size() == 3) {
            for (auto x : reps) edges.emplace_back(root, x);
        } else {
            throw ValidationError("newick: root must have two or three children, has " +
                                  std::to_string(reps.size()));
        }
        return Dendrogram::from_edges(std::move(labels), leaf_nodes, edges);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::vector<RawNode> nodes_;
};

}  // namespace

std::string to_newick(const Dendrogram& t) {
    const auto& labels = t.labels();
    const auto first = static_cast<Dendrogram::Node>(std::min_element(labels.begin(), labels.end()) - labels.begin());
    const auto root = t.neighbors(first)[0];
    return render(t, root, Dendrogram::kNone).text + ";";
}

Dendrogram parse_newick(std::string_view text) { return NewickReader(text).read(); }

}  // namespace ncdlab
