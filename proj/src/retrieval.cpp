#include "luandri/retrieval.hpp"

#include "luandri/tokenize.hpp"
#include "luandri/window.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace luandri {

std::uint64_t VirtualPosting::cf() const noexcept {
    return std::accumulate(entries.begin(), entries.end(), std::uint64_t{0},
                           [](std::uint64_t sum, const Entry& e) { return sum + e.matches.size(); });
}

const VirtualPosting::Entry* VirtualPosting::find(DocId docid) const noexcept {
    const auto it = std::lower_bound(entries.begin(), entries.end(), docid,
                                     [](const Entry& e, DocId d) { return e.docid < d; });
    return it != entries.end() && it->docid == docid ? &*it : nullptr;
}

std::uint64_t VirtualPosting::tf(DocId docid) const noexcept {
    const auto* entry = find(docid);
    return entry ? entry->matches.size() : 0;
}

double dirichlet_probability(double tf, double cf, double doclen, double total_terms, double mu) noexcept {
    return (tf + mu * cf / total_terms) / (doclen + mu);
}

namespace {

void sort_unique(std::vector<Position>& v) {
    std::ranges::sort(v);
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

VirtualPosting evaluate_term(const QueryEnvironment& env, const std::string& term) {
    VirtualPosting out;
    for (const auto& shard : env.shards()) {
        const auto* list = shard.snapshot->postings(term);
        if (list == nullptr) continue;
        for (const auto& entry : list->entries) {
            out.entries.push_back({shard.offset + entry.docid, entry.positions, entry.positions});
        }
    }
    return out;
}

template <typename Eval>
VirtualPosting evaluate_window(const QueryEnvironment& env, const std::vector<std::string>& terms, Eval&& eval) {
    VirtualPosting out;
    for (const auto& shard : env.shards()) {
        std::vector<const PostingList*> lists;
        for (const auto& term : terms) {
            const auto* list = shard.snapshot->postings(term);
            if (list == nullptr) break;
            lists.push_back(list);
        }
        if (lists.size() != terms.size()) continue;

        const auto* rarest = *std::ranges::min_element(lists, {}, &PostingList::df);
        std::vector<PositionList> positions(lists.size());
        for (const auto& anchor : rarest->entries) {
            bool everywhere = true;
            for (std::size_t t = 0; t < lists.size() && everywhere; ++t) {
                const auto& entries = lists[t]->entries;
                const auto it = std::lower_bound(entries.begin(), entries.end(), anchor.docid,
                                                 [](const Posting& p, DocId d) { return p.docid < d; });
                if (it == entries.end() || it->docid != anchor.docid) {
                    everywhere = false;
                } else {
                    positions[t] = it->positions;
                }
            }
            if (!everywhere) continue;
            VirtualPosting::Entry entry{shard.offset + anchor.docid, {}, {}};
            entry.matches = eval(std::span<const PositionList>(positions), &entry.covered);
            if (entry.matches.empty()) continue;
            sort_unique(entry.covered);
            out.entries.push_back(std::move(entry));
        }
    }
    return out;
}

struct BeliefNode {
    int leaf = -1;  // index into the leaf table, or -1 for a Combine
    std::vector<BeliefNode> children;
};

struct CompiledBelief {
    std::vector<VirtualPosting> leaves;
    std::vector<std::uint64_t> leaf_cf;
    BeliefNode root;
};

BeliefNode compile_node(const QueryEnvironment& env, const QueryNode& node, CompiledBelief& out) {
    BeliefNode compiled;
    if (const auto* combine = std::get_if<CombineNode>(&node.value)) {
        for (const auto& child : combine->children) compiled.children.push_back(compile_node(env, child, out));
        return compiled;
    }
    compiled.leaf = static_cast<int>(out.leaves.size());
    out.leaves.push_back(evaluate_proximity(env, node));
    out.leaf_cf.push_back(out.leaves.back().cf());
    return compiled;
}

CompiledBelief compile(const QueryEnvironment& env, const QueryNode& belief) {
    CompiledBelief out;
    out.root = compile_node(env, belief, out);
    return out;
}

// Leaves with zero collection frequency drop out of their Combine's mean.
bool is_live(const BeliefNode& node, const CompiledBelief& belief) {
    if (node.leaf >= 0) return belief.leaf_cf[static_cast<std::size_t>(node.leaf)] > 0;
    return std::ranges::any_of(node.children, [&](const BeliefNode& c) { return is_live(c, belief); });
}

std::optional<double> score_node(const BeliefNode& node, const CompiledBelief& belief, DocId docid, double doclen,
                                 double total_terms, double mu) {
    if (node.leaf >= 0) {
        const auto leaf = static_cast<std::size_t>(node.leaf);
        const auto cf = belief.leaf_cf[leaf];
        if (cf == 0) return std::nullopt;
        const auto tf = belief.leaves[leaf].tf(docid);
        return std::log(dirichlet_probability(static_cast<double>(tf), static_cast<double>(cf), doclen,
                                              total_terms, mu));
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& child : node.children) {
        if (auto s = score_node(child, belief, docid, doclen, total_terms, mu)) {
            sum += *s;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

void check_scorable(const QueryEnvironment& env, const ScoringParams& params) {
    if (env.empty()) throw RetrievalError("no index has been added to the environment");
    if (env.total_terms() == 0) throw RetrievalError("cannot score against an empty collection");
    if (!(params.mu > 0.0) || !std::isfinite(params.mu)) {
        throw RetrievalError(fmt::format("mu must be a positive finite number, got {}", params.mu));
    }
}

}  // namespace

VirtualPosting eval_syn(std::span<const VirtualPosting> children) {
    std::map<DocId, VirtualPosting::Entry> merged;
    for (const auto& child : children) {
        for (const auto& entry : child.entries) {
            auto& target = merged[entry.docid];
            target.docid = entry.docid;
            target.matches.insert(target.matches.end(), entry.matches.begin(), entry.matches.end());
            target.covered.insert(target.covered.end(), entry.covered.begin(), entry.covered.end());
        }
    }
    VirtualPosting out;
    out.entries.reserve(merged.size());
    for (auto& [docid, entry] : merged) {
        sort_unique(entry.matches);
        sort_unique(entry.covered);
        out.entries.push_back(std::move(entry));
    }
    return out;
}

VirtualPosting evaluate_proximity(const QueryEnvironment& env, const QueryNode& node) {
    return std::visit(
        [&](const auto& n) -> VirtualPosting {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TermNode>) {
                return evaluate_term(env, n.term);
            } else if constexpr (std::is_same_v<T, SynNode>) {
                std::vector<VirtualPosting> children;
                children.reserve(n.children.size());
                for (const auto& child : n.children) children.push_back(evaluate_proximity(env, child));
                return eval_syn(children);
            } else if constexpr (std::is_same_v<T, OrderedWindowNode>) {
                return evaluate_window(env, n.terms, [&](std::span<const PositionList> p, std::vector<Position>* c) {
                    return eval_ordered_window(n.width, p, c);
                });
            } else if constexpr (std::is_same_v<T, UnorderedWindowNode>) {
                return evaluate_window(env, n.terms, [&](std::span<const PositionList> p, std::vector<Position>* c) {
                    return eval_unordered_window(n.width, p, c);
                });
            } else {
                throw RetrievalError("#combine is not a proximity operator");
            }
        },
        node.value);
}

std::optional<double> score_document(const QueryNode& belief, DocId docid, const QueryEnvironment& env,
                                     const ScoringParams& params) {
    check_scorable(env, params);
    const auto where = env.locate(docid);
    if (!where) throw RetrievalError(fmt::format("unknown document {}", docid));
    const auto compiled = compile(env, belief);
    const auto doclen = where->first->snapshot->document(where->second)->doclen;
    return score_node(compiled.root, compiled, docid, static_cast<double>(doclen),
                      static_cast<double>(env.total_terms()), params.mu);
}

std::vector<ScoredResult> run_query(const QueryEnvironment& env, const SearchRequest& request,
                                    const ScoringParams& params, const WarningSink& warn,
                                    const SnippetConfig& snippets) {
    const auto parsed = parse_query(request.query);
    check_scorable(env, params);

    std::set<std::string, std::less<>> stopset;
    if (request.stopwords) {
        for (const auto& word : *request.stopwords) {
            if (find_invalid_utf8(word) != std::string_view::npos) {
                throw RetrievalError("stop word is not valid UTF-8");
            }
            for (auto& term : tokenize(word)) stopset.insert(std::move(term));
        }
    }
    const auto belief = apply_stopwords(parsed.belief, stopset);
    if (!belief) return {};

    const auto compiled = compile(env, *belief);
    if (!is_live(compiled.root, compiled)) return {};

    std::vector<DocId> candidates;
    if (request.doc_id_restriction) {
        for (const auto docid : *request.doc_id_restriction) {
            if (env.locate(docid)) {
                candidates.push_back(docid);
            } else if (warn) {
                warn(fmt::format("document id {} is not in the collection, ignored", docid));
            }
        }
    } else {
        for (std::size_t i = 0; i < compiled.leaves.size(); ++i) {
            if (compiled.leaf_cf[i] == 0) continue;
            for (const auto& entry : compiled.leaves[i].entries) candidates.push_back(entry.docid);
        }
    }
    std::ranges::sort(candidates);
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    struct Hit {
        DocId docid;
        double score;
    };
    std::vector<Hit> hits;
    const auto total_terms = static_cast<double>(env.total_terms());
    for (const auto docid : candidates) {
        const bool admitted = std::ranges::all_of(parsed.filters, [&](const NumericFilter& f) {
            const auto value = env.field_value(f.field, docid);
            return value && f.accepts(*value);
        });
        if (!admitted) continue;
        const auto where = env.locate(docid);
        const auto doclen = static_cast<double>(where->first->snapshot->document(where->second)->doclen);
        if (auto score = score_node(compiled.root, compiled, docid, doclen, total_terms, params.mu)) {
            hits.push_back({docid, *score});
        }
    }

    const auto by_rank = [](const Hit& a, const Hit& b) {
        return a.score != b.score ? a.score > b.score : a.docid < b.docid;
    };
    const auto keep = std::min(hits.size(), request.results_requested);
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), by_rank);
    hits.resize(keep);

    std::vector<ScoredResult> results;
    results.reserve(hits.size());
    for (const auto& hit : hits) {
        const auto [shard, local] = *env.locate(hit.docid);
        std::vector<Position> highlights;
        for (const auto& leaf : compiled.leaves) {
            if (const auto* entry = leaf.find(hit.docid)) {
                highlights.insert(highlights.end(), entry->covered.begin(), entry->covered.end());
            }
        }
        sort_unique(highlights);
        const auto tokens = shard->snapshot->document_tokens(local);
        results.push_back(ScoredResult{hit.docid, shard->snapshot->document(local)->name,
                                       generate_snippet(tokens, highlights, snippets), hit.score});
    }
    return results;
}

std::vector<ScoredResult> run_query(const IndexSnapshot& snapshot, const SearchRequest& request,
                                    const ScoringParams& params, const WarningSink& warn,
                                    const SnippetConfig& snippets) {
    QueryEnvironment env;
    env.add_index(std::shared_ptr<const IndexSnapshot>(&snapshot, [](const IndexSnapshot*) {}));
    return run_query(env, request, params, warn, snippets);
}

}  // namespace luandri
