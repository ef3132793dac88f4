#pragma once

#include "luandri/environment.hpp"
#include "luandri/error.hpp"
#include "luandri/query.hpp"
#include "luandri/snippet.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace luandri {

struct SearchRequest {
    std::string query;
    std::size_t results_requested = 10;
    std::optional<std::vector<DocId>> doc_id_restriction;
    std::optional<std::vector<std::string>> stopwords;
};

struct ScoredResult {
    DocId docid = 0;
    std::string document_name;
    std::string snippet;
    double score = 0.0;  // log-probability, <= 0

    friend bool operator==(const ScoredResult&, const ScoredResult&) = default;
};

struct ScoringParams {
    double mu = 2500.0;  // Dirichlet pseudo-count, > 0
};

/// Occurrences synthesized for a proximity node (term, window or synonym).
/// `matches` are the positions counted as tf; `covered` are the token
/// positions highlighted in snippets. Entries are sorted by docid and only
/// documents with at least one match appear.
struct VirtualPosting {
    struct Entry {
        DocId docid = 0;
        std::vector<Position> matches;
        std::vector<Position> covered;
    };

    std::vector<Entry> entries;

    std::uint64_t df() const noexcept { return entries.size(); }
    std::uint64_t cf() const noexcept;
    std::uint64_t tf(DocId docid) const noexcept;
    const Entry* find(DocId docid) const noexcept;
};

/// Smoothed unigram estimate (tf + mu * cf / |C|) / (|D| + mu).
double dirichlet_probability(double tf, double cf, double doclen, double total_terms, double mu) noexcept;

/// Evaluates a proximity node (TermNode, SynNode, OrderedWindowNode,
/// UnorderedWindowNode) over every document in the environment.
VirtualPosting evaluate_proximity(const QueryEnvironment& env, const QueryNode& node);

/// Per-document union of the children's matches; duplicates collapse.
VirtualPosting eval_syn(std::span<const VirtualPosting> children);

/// Log-probability of one document under `belief`; nullopt when every leaf
/// has zero collection frequency. Throws RetrievalError on an empty collection.
std::optional<double> score_document(const QueryNode& belief, DocId docid, const QueryEnvironment& env,
                                     const ScoringParams& params = {});

/// Full pipeline: parse, remove stop words, build virtual postings over the
/// whole collection, pick candidates, filter, score, rank (score descending,
/// docid ascending), truncate, attach snippets.
std::vector<ScoredResult> run_query(const QueryEnvironment& env, const SearchRequest& request,
                                    const ScoringParams& params = {}, const WarningSink& warn = {},
                                    const SnippetConfig& snippets = {});

std::vector<ScoredResult> run_query(const IndexSnapshot& snapshot, const SearchRequest& request,
                                    const ScoringParams& params = {}, const WarningSink& warn = {},
                                    const SnippetConfig& snippets = {});

}  // namespace luandri
