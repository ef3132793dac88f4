#include "luandri/luandri.h"

#include "luandri/error.hpp"
#include "luandri/retrieval.hpp"
#include "luandri/storage.hpp"

#include <fmt/core.h>

#include <cstddef>
#include <memory>
#include <mutex>
#include <new>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

static_assert(sizeof(luandri_request) == 48 && alignof(luandri_request) == 8);
static_assert(offsetof(luandri_request, query) == 0);
static_assert(offsetof(luandri_request, results_requested) == 8);
static_assert(offsetof(luandri_request, doc_ids) == 16);
static_assert(offsetof(luandri_request, doc_id_count) == 24);
static_assert(offsetof(luandri_request, stopwords) == 32);
static_assert(offsetof(luandri_request, stopword_count) == 40);
static_assert(sizeof(luandri_result) == 32 && alignof(luandri_result) == 8);
static_assert(offsetof(luandri_result, docid) == 0);
static_assert(offsetof(luandri_result, document_name) == 8);
static_assert(offsetof(luandri_result, snippet) == 16);
static_assert(offsetof(luandri_result, score) == 24);

namespace {

struct Environment {
    std::shared_mutex indexes;  // add_index exclusive, queries shared
    luandri::QueryEnvironment env;
    std::mutex error_mutex;
    std::string last_error;

    void set_error(std::string message) {
        std::lock_guard lock(error_mutex);
        last_error = std::move(message);
    }
    void clear_error() { set_error({}); }
};

struct ResultSet {
    luandri_env owner = 0;
    std::vector<luandri::ScoredResult> results;
};

class Registry {
public:
    luandri_env add_env(std::shared_ptr<Environment> env) {
        std::lock_guard lock(mutex_);
        const auto id = next_++;
        envs_.emplace(id, std::move(env));
        return id;
    }

    std::shared_ptr<Environment> env(luandri_env id) {
        std::lock_guard lock(mutex_);
        const auto it = envs_.find(id);
        return it == envs_.end() ? nullptr : it->second;
    }

    bool remove_env(luandri_env id) {
        std::lock_guard lock(mutex_);
        if (envs_.erase(id) == 0) return false;
        std::erase_if(results_, [id](const auto& entry) { return entry.second->owner == id; });
        return true;
    }

    luandri_results add_results(std::shared_ptr<ResultSet> set) {
        std::lock_guard lock(mutex_);
        if (!envs_.contains(set->owner)) return 0;
        const auto id = next_++;
        results_.emplace(id, std::move(set));
        return id;
    }

    std::shared_ptr<ResultSet> results(luandri_results id) {
        std::lock_guard lock(mutex_);
        const auto it = results_.find(id);
        return it == results_.end() ? nullptr : it->second;
    }

    bool remove_results(luandri_results id) {
        std::lock_guard lock(mutex_);
        return results_.erase(id) != 0;
    }

private:
    std::mutex mutex_;
    std::uint64_t next_ = 1;
    std::unordered_map<luandri_env, std::shared_ptr<Environment>> envs_;
    std::unordered_map<luandri_results, std::shared_ptr<ResultSet>> results_;
};

Registry& registry() {
    static Registry instance;
    return instance;
}

void write_sentinel(luandri_result* out) {
    if (out == nullptr) return;
    out->docid = -1;
    out->document_name = "";
    out->snippet = "";
    out->score = 0.0;
}

// Runs `body` and turns every exception into a status plus an env message.
template <typename Body>
int32_t guarded(Environment& env, Body&& body) {
    try {
        const int32_t status = body();
        if (status == LUANDRI_OK) env.clear_error();
        return status;
    } catch (const luandri::ParseError& e) {
        env.set_error(e.what());
        return LUANDRI_PARSE_ERROR;
    } catch (const luandri::IndexError& e) {
        env.set_error(e.what());
        return LUANDRI_IO_ERROR;
    } catch (const luandri::RetrievalError& e) {
        env.set_error(e.what());
        return LUANDRI_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        env.set_error("out of memory");
        return LUANDRI_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        env.set_error(fmt::format("internal error: {}", e.what()));
        return LUANDRI_INTERNAL_ERROR;
    } catch (...) {
        env.set_error("internal error");
        return LUANDRI_INTERNAL_ERROR;
    }
}

}  // namespace

extern "C" {

LUANDRI_API luandri_env luandri_env_create(void) {
    try {
        return registry().add_env(std::make_shared<Environment>());
    } catch (...) {
        return 0;
    }
}

LUANDRI_API int32_t luandri_env_destroy(luandri_env env) {
    try {
        return registry().remove_env(env) ? LUANDRI_OK : LUANDRI_INVALID_ARGUMENT;
    } catch (...) {
        return LUANDRI_INTERNAL_ERROR;
    }
}

LUANDRI_API int32_t luandri_env_add_index(luandri_env handle, const char* path) {
    const auto env = registry().env(handle);
    if (!env) return LUANDRI_INVALID_ARGUMENT;
    return guarded(*env, [&]() -> int32_t {
        if (path == nullptr) {
            env->set_error("index path is null");
            return LUANDRI_INVALID_ARGUMENT;
        }
        auto snapshot = std::make_shared<const luandri::IndexSnapshot>(luandri::open_index(path));
        std::unique_lock lock(env->indexes);
        env->env.add_index(std::move(snapshot));
        return LUANDRI_OK;
    });
}

LUANDRI_API int32_t luandri_env_run_query(luandri_env handle, const luandri_request* request, luandri_results* out) {
    if (out != nullptr) *out = 0;
    const auto env = registry().env(handle);
    if (!env) return LUANDRI_INVALID_ARGUMENT;
    return guarded(*env, [&]() -> int32_t {
        auto invalid = [&](const char* message) {
            env->set_error(message);
            return LUANDRI_INVALID_ARGUMENT;
        };
        if (out == nullptr) return invalid("result handle pointer is null");
        if (request == nullptr) return invalid("request is null");
        if (request->query == nullptr) return invalid("request query is null");
        if (request->results_requested < 0) return invalid("results_requested must not be negative");
        if (request->doc_id_count < 0 || (request->doc_id_count > 0 && request->doc_ids == nullptr)) {
            return invalid("doc_ids array does not match doc_id_count");
        }
        if (request->stopword_count < 0 || (request->stopword_count > 0 && request->stopwords == nullptr)) {
            return invalid("stopwords array does not match stopword_count");
        }

        luandri::SearchRequest converted;
        converted.query = request->query;
        converted.results_requested = static_cast<std::size_t>(request->results_requested);
        if (request->doc_id_count > 0) {
            auto& ids = converted.doc_id_restriction.emplace();
            for (int64_t i = 0; i < request->doc_id_count; ++i) {
                ids.push_back(static_cast<luandri::DocId>(request->doc_ids[i]));
            }
        }
        if (request->stopword_count > 0) {
            auto& words = converted.stopwords.emplace();
            for (int64_t i = 0; i < request->stopword_count; ++i) {
                if (request->stopwords[i] == nullptr) return invalid("stop word is null");
                words.emplace_back(request->stopwords[i]);
            }
        }

        auto set = std::make_shared<ResultSet>();
        set->owner = handle;
        {
            std::shared_lock lock(env->indexes);
            set->results = luandri::run_query(env->env, converted);
        }
        const auto id = registry().add_results(std::move(set));
        if (id == 0) return invalid("environment was destroyed during the query");
        *out = id;
        return LUANDRI_OK;
    });
}

LUANDRI_API int64_t luandri_results_count(luandri_results results) {
    try {
        const auto set = registry().results(results);
        return set ? static_cast<int64_t>(set->results.size()) : -1;
    } catch (...) {
        return -1;
    }
}

LUANDRI_API int32_t luandri_results_get(luandri_results results, int64_t index, luandri_result* out) {
    try {
        write_sentinel(out);
        const auto set = registry().results(results);
        if (!set || out == nullptr) return LUANDRI_INVALID_ARGUMENT;
        if (index < 0 || static_cast<uint64_t>(index) >= set->results.size()) {
            if (const auto env = registry().env(set->owner)) {
                env->set_error(fmt::format("result index {} out of range [0, {})", index, set->results.size()));
            }
            return LUANDRI_INVALID_ARGUMENT;
        }
        const auto& r = set->results[static_cast<std::size_t>(index)];
        out->docid = static_cast<int64_t>(r.docid);
        out->document_name = r.document_name.c_str();
        out->snippet = r.snippet.c_str();
        out->score = r.score;
        return LUANDRI_OK;
    } catch (...) {
        return LUANDRI_INTERNAL_ERROR;
    }
}

LUANDRI_API int32_t luandri_results_destroy(luandri_results results) {
    try {
        return registry().remove_results(results) ? LUANDRI_OK : LUANDRI_INVALID_ARGUMENT;
    } catch (...) {
        return LUANDRI_INTERNAL_ERROR;
    }
}

LUANDRI_API const char* luandri_last_error(luandri_env handle) {
    static const char* const unknown = "unknown environment handle";
    const auto env = registry().env(handle);
    if (!env) return unknown;
    std::lock_guard lock(env->error_mutex);
    return env->last_error.c_str();
}

}  // extern "C"
