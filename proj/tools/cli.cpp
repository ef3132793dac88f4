#include "cli.hpp"

#include "luandri/ingest.hpp"
#include "luandri/retrieval.hpp"
#include "luandri/storage.hpp"
#include "luandri/tokenize.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace luandri::cli {

namespace fs = std::filesystem;

namespace {

struct IndexOptions {
    std::string corpus;
    std::string format = "trec";
    std::string out;
    std::string fields;
};

struct SearchOptions {
    std::string index;
    std::string query;
    std::string batch;
    std::int64_t results = 10;
    double mu = 2500.0;
    std::string stopwords;
    std::string run_tag = "luandri";
    bool single_query = false;
};

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot read {}", path.string()));
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Regular files under `root`, sorted by path; `root` itself if it is a file.
std::vector<fs::path> corpus_files(const fs::path& root) {
    if (fs::is_regular_file(root)) return {root};
    if (!fs::is_directory(root)) throw Error(fmt::format("corpus {} does not exist", root.string()));
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::ranges::sort(files);
    return files;
}

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

int cmd_index(const IndexOptions& opts, std::ostream& out, std::ostream& err) {
    const auto fields = split_csv(opts.fields);
    const std::set<std::string> field_set(fields.begin(), fields.end());
    const fs::path root(opts.corpus);
    const auto warn = [&err](std::string_view message) { fmt::print(err, "warning: {}\n", message); };

    std::vector<RawDocument> docs;
    for (const auto& file : corpus_files(root)) {
        const auto bytes = read_bytes(file);
        try {
            if (opts.format == "trec") {
                auto parsed = parse_trec(bytes, field_set, warn);
                std::move(parsed.begin(), parsed.end(), std::back_inserter(docs));
            } else {
                const auto name = file == root ? file.filename() : file.lexically_relative(root);
                docs.push_back(parse_plaintext(name.generic_string(), bytes));
            }
        } catch (const IngestError& e) {
            throw Error(fmt::format("{}: {}", file.string(), e.what()));
        }
    }

    const auto snapshot = build_index(docs, fields);
    write_index(snapshot, opts.out);
    const auto& stats = snapshot.stats();
    fmt::print(out, "doc_count {}\ntotal_terms {}\nvocab_size {}\n", stats.doc_count, stats.total_terms,
               stats.vocab_size);
    return 0;
}

int cmd_search(const SearchOptions& opts, std::ostream& out, std::ostream& err) {
    QueryEnvironment env;
    env.add_index(fs::path(opts.index));

    SearchRequest base;
    base.results_requested = static_cast<std::size_t>(opts.results);
    if (!opts.stopwords.empty()) base.stopwords = tokenize(read_bytes(opts.stopwords));
    const ScoringParams params{opts.mu};
    const auto warn = [&err](std::string_view message) { fmt::print(err, "warning: {}\n", message); };

    if (opts.single_query) {
        auto request = base;
        request.query = opts.query;
        const auto results = run_query(env, request, params, warn);
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            fmt::print(out, "{}\t{}\t{}\t{}\t{}\n", i + 1, r.docid, r.document_name, r.score, r.snippet);
        }
        return 0;
    }

    std::ifstream in(opts.batch);
    if (!in) throw Error(fmt::format("cannot read batch file {}", opts.batch));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw Error(fmt::format("{}:{}: expected 'qid<TAB>query'", opts.batch, line_no));
        }
        auto request = base;
        const auto qid = line.substr(0, tab);
        request.query = line.substr(tab + 1);
        std::vector<ScoredResult> results;
        try {
            results = run_query(env, request, params, warn);
        } catch (const ParseError& e) {
            throw Error(fmt::format("{}:{}: query {}: {}", opts.batch, line_no, qid, e.what()));
        }
        for (std::size_t i = 0; i < results.size(); ++i) {
            fmt::print(out, "{} Q0 {} {} {:.6f} {}\n", qid, results[i].document_name, i + 1, results[i].score,
                       opts.run_tag);
        }
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Build and search positional indexes with structured queries"};
    app.require_subcommand(1);

    IndexOptions index_opts;
    auto* index = app.add_subcommand("index", "Build an index from a TREC-text or plain-text corpus");
    index->add_option("--corpus", index_opts.corpus, "Corpus file or directory")->required();
    index->add_option("--format", index_opts.format, "Corpus format")
        ->check(CLI::IsMember({"trec", "text"}))
        ->capture_default_str();
    index->add_option("--out", index_opts.out, "Output index directory")->required();
    index->add_option("--fields", index_opts.fields, "Comma-separated numeric fields to index");

    SearchOptions search_opts;
    auto* search = app.add_subcommand("search", "Search an index interactively or in batch mode");
    search->add_option("--index", search_opts.index, "Index directory")->required();
    auto* query = search->add_option("--query", search_opts.query, "Structured query");
    auto* batch = search->add_option("--batch", search_opts.batch, "File of 'qid<TAB>query' lines");
    query->excludes(batch);
    batch->excludes(query);
    search->add_option("-n", search_opts.results, "Results per query")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    search->add_option("--mu", search_opts.mu, "Dirichlet smoothing pseudo-count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    search->add_option("--stopwords", search_opts.stopwords, "File of stop words");
    search->add_option("--run-tag", search_opts.run_tag, "Run tag for batch output")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*index) return cmd_index(index_opts, out, err);
        if (query->count() == 0 && batch->count() == 0) {
            fmt::print(err, "error: search needs exactly one of --query or --batch\n");
            return 2;
        }
        search_opts.single_query = query->count() > 0;
        return cmd_search(search_opts, out, err);
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return 1;
    }
}

}  // namespace luandri::cli
