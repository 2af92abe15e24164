#include "perfset/provider.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "perfset/error.hpp"
#include "perfset/util.hpp"

namespace perfset::provider {

namespace fs = std::filesystem;

void validate(const ProviderHandle& handle) {
    if (handle.label.empty()) throw config_error("provider", "provider label must be non-empty");
    if (handle.max_retries < 0) throw config_error("provider", "max_retries must be >= 0");
    if (handle.rate_limit_per_min <= 0) throw config_error("provider", "rate_limit must be > 0");
    if (handle.temperature < 0) throw config_error("provider", "temperature must be >= 0");
    if (handle.kind == ProviderKind::http_chat) {
        if (handle.endpoint.empty() || handle.model_name.empty()) {
            throw config_error("provider", "http_chat requires endpoint and model_name");
        }
    } else {
        if (handle.replay_root.empty()) {
            throw config_error("provider", "replay requires replay_root");
        }
    }
}

nlohmann::json to_json(const CandidateSolution& c) {
    return {
        {"task_id", c.task_id},
        {"source_code", c.source_code},
        {"provider_label", c.provider_label},
        {"sample_index", c.sample_index},
        {"prompt_fingerprint", c.prompt_fingerprint},
    };
}

CandidateSolution candidate_from_json(const nlohmann::json& j) {
    CandidateSolution c;
    c.task_id = j.at("task_id").get<std::string>();
    c.source_code = j.at("source_code").get<std::string>();
    c.provider_label = j.at("provider_label").get<std::string>();
    c.sample_index = j.at("sample_index").get<int>();
    c.prompt_fingerprint = j.value("prompt_fingerprint", std::string{});
    return c;
}

// ---------------------------------------------------------------------------
// Retry jitter
// ---------------------------------------------------------------------------

namespace {

std::mutex g_jitter_mutex;
std::mt19937_64 g_jitter_rng{0x9e3779b97f4a7c15ULL};

double jitter_fraction() {
    std::lock_guard<std::mutex> lock(g_jitter_mutex);
    return std::uniform_real_distribution<double>(0.0, 0.25)(g_jitter_rng);
}

}  // namespace

void set_retry_jitter_seed(std::uint64_t seed) {
    std::lock_guard<std::mutex> lock(g_jitter_mutex);
    g_jitter_rng.seed(seed);
}

// ---------------------------------------------------------------------------
// Replay provider
// ---------------------------------------------------------------------------

namespace {

class ReplayProvider final : public Provider {
public:
    explicit ReplayProvider(ProviderHandle handle) : handle_(std::move(handle)) {}

    const std::string& label() const override { return handle_.label; }

    std::vector<std::string> complete(const std::string& task_id, const std::string& /*prompt*/,
                                      int n) override {
        std::vector<std::string> responses;
        fs::path dir = fs::path(handle_.replay_root) / task_id / handle_.label;
        for (int i = 0; i < n; ++i) {
            auto text = util::try_read_file((dir / (std::to_string(i) + ".txt")).string());
            if (!text) break;  // stored responses are contiguous from 0
            responses.push_back(std::move(*text));
        }
        if (responses.empty()) {
            throw provider_error("replay_missing",
                                 "no stored responses under " + dir.string());
        }
        return responses;
    }

private:
    ProviderHandle handle_;
};

// ---------------------------------------------------------------------------
// HTTP chat-completions provider
// ---------------------------------------------------------------------------

struct ParsedEndpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

ParsedEndpoint parse_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw config_error("provider", "endpoint must be an absolute URL: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

bool retryable_status(int status) {
    return status == 429 || status == 408 || status >= 500;
}

class HttpChatProvider final : public Provider {
public:
    explicit HttpChatProvider(ProviderHandle handle)
        : handle_(std::move(handle)), endpoint_(parse_endpoint(handle_.endpoint)) {}

    const std::string& label() const override { return handle_.label; }

    std::vector<std::string> complete(const std::string& /*task_id*/, const std::string& prompt,
                                      int n) override {
        nlohmann::json body = {
            {"model", handle_.model_name},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
            {"temperature", handle_.temperature},
            {"n", n},
        };
        const std::string payload = body.dump();

        std::string last_failure = "no attempt made";
        for (int attempt = 0; attempt <= handle_.max_retries; ++attempt) {
            if (attempt > 0) backoff(attempt);
            pace();

            httplib::Client client(endpoint_.base);
            client.set_connection_timeout(std::chrono::duration<double>(handle_.request_timeout_s));
            client.set_read_timeout(std::chrono::duration<double>(handle_.request_timeout_s));
            httplib::Headers headers;
            if (!handle_.api_key_env.empty()) {
                if (const char* key = std::getenv(handle_.api_key_env.c_str())) {
                    headers.emplace("Authorization", std::string("Bearer ") + key);
                }
            }
            auto res = client.Post(endpoint_.path, headers, payload, "application/json");
            if (!res) {
                last_failure = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 200) return parse_choices(res->body);
            last_failure = "HTTP " + std::to_string(res->status);
            if (!retryable_status(res->status)) break;
        }
        throw provider_error("request_failed",
                             handle_.label + ": " + last_failure + " after " +
                                 std::to_string(handle_.max_retries) + " retries");
    }

private:
    void backoff(int attempt) {
        const double base_ms = static_cast<double>(handle_.retry_backoff_ms);
        const double delay_ms = base_ms * std::pow(2.0, attempt - 1) * (1.0 + jitter_fraction());
        std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(delay_ms));
    }

    // Keeps request starts at least 60/rate_limit seconds apart.
    void pace() {
        const auto min_gap = std::chrono::duration<double>(60.0 / handle_.rate_limit_per_min);
        std::unique_lock<std::mutex> lock(pace_mutex_);
        const auto now = std::chrono::steady_clock::now();
        if (last_request_.time_since_epoch().count() != 0) {
            const auto next_allowed =
                last_request_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(min_gap);
            if (now < next_allowed) {
                lock.unlock();
                std::this_thread::sleep_until(next_allowed);
                lock.lock();
            }
        }
        last_request_ = std::chrono::steady_clock::now();
    }

    std::vector<std::string> parse_choices(const std::string& body) {
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw provider_error("bad_response", handle_.label + ": unparseable response body");
        }
        std::vector<std::string> out;
        if (!parsed.contains("choices")) {
            throw provider_error("bad_response", handle_.label + ": response has no choices");
        }
        for (const auto& choice : parsed["choices"]) {
            if (choice.contains("message") && choice["message"].contains("content")) {
                out.push_back(choice["message"]["content"].get<std::string>());
            }
        }
        return out;
    }

    ProviderHandle handle_;
    ParsedEndpoint endpoint_;
    std::mutex pace_mutex_;
    std::chrono::steady_clock::time_point last_request_{};
};

}  // namespace

std::unique_ptr<Provider> make_provider(const ProviderHandle& handle) {
    validate(handle);
    if (handle.kind == ProviderKind::replay) return std::make_unique<ReplayProvider>(handle);
    return std::make_unique<HttpChatProvider>(handle);
}

// ---------------------------------------------------------------------------
// Prompts
// ---------------------------------------------------------------------------

std::string default_completion_template() {
    return "Please continue to complete the function. You are not allowed to modify the given "
           "code and do the completion only. Please return all completed functions in a code "
           "block. Here is the given code to complete:\n```{{language}}\n{{prompt}}\n```\n";
}

std::string default_test_synthesis_template() {
    return "Write assertion-style test cases for the function below. Return each test case in "
           "its own code block, where a test case is a single assertion that calls the function "
           "and checks its result. Do not modify the function.\n\nTask description:\n"
           "{{instruction}}\n\nFunction:\n```{{language}}\n{{solution}}\n```\n";
}

std::string build_prompt(const Task& task, const std::string& template_text) {
    if (task.instruction.empty()) {
        throw input_error("empty_instruction", "task " + task.id + " has no instruction");
    }
    if (template_text.find("{{prompt}}") == std::string::npos) {
        throw config_error("missing_placeholder",
                           "completion template lacks the {{prompt}} placeholder");
    }
    std::string out = util::replace_all(template_text, "{{prompt}}", task.instruction);
    out = util::replace_all(std::move(out), "{{language}}", to_string(task.language));
    return out;
}

std::string render_test_synthesis_prompt(const Task& task, const std::string& template_text) {
    if (template_text.find("{{instruction}}") == std::string::npos ||
        template_text.find("{{solution}}") == std::string::npos) {
        throw config_error("missing_placeholder",
                           "test synthesis template needs {{instruction}} and {{solution}}");
    }
    std::string out = util::replace_all(template_text, "{{instruction}}", task.instruction);
    out = util::replace_all(std::move(out), "{{solution}}", task.initial_solution);
    out = util::replace_all(std::move(out), "{{language}}", to_string(task.language));
    return out;
}

std::string prompt_fingerprint(const std::string& prompt) {
    return util::fnv1a_hex(prompt);
}

// ---------------------------------------------------------------------------
// Fenced block extraction
// ---------------------------------------------------------------------------

std::vector<CodeBlock> extract_code_blocks(const std::string& text) {
    std::vector<CodeBlock> blocks;
    std::istringstream in(text);
    std::string line;
    bool inside = false;
    CodeBlock current;
    std::string body;
    while (std::getline(in, line)) {
        std::string trimmed = util::trim(line);
        if (util::starts_with(trimmed, "```")) {
            if (!inside) {
                inside = true;
                current.info = util::to_lower(util::trim(trimmed.substr(3)));
                body.clear();
            } else {
                current.body = body;
                blocks.push_back(current);
                inside = false;
            }
            continue;
        }
        if (inside) {
            body += line;
            body += '\n';
        }
    }
    // An unterminated fence yields no block: prose must never leak into code.
    return blocks;
}

namespace {

bool info_matches_language(const std::string& info, Language lang) {
    if (info.empty()) return false;
    std::string head = util::split(info, ' ').front();
    auto parsed = parse_language(head);
    return parsed && *parsed == lang;
}

}  // namespace

std::optional<std::string> extract_candidate_code(const std::string& response, Language language) {
    auto blocks = extract_code_blocks(response);
    if (blocks.empty()) return std::nullopt;
    for (const auto& block : blocks) {
        if (info_matches_language(block.info, language)) return block.body;
    }
    return blocks.front().body;
}

// ---------------------------------------------------------------------------
// Candidate generation
// ---------------------------------------------------------------------------

std::vector<CandidateSolution> generate_candidates(const Task& task,
                                                   const std::vector<ProviderHandle>& providers,
                                                   int n_per_provider,
                                                   const std::string& template_text,
                                                   GenerationReport* report) {
    if (n_per_provider < 1) throw input_error("bad_argument", "n_per_provider must be >= 1");
    const std::string prompt = build_prompt(task, template_text);
    const std::string fingerprint = prompt_fingerprint(prompt);

    std::vector<CandidateSolution> candidates;
    int failed = 0;
    std::vector<std::string> failures;
    for (const auto& handle : providers) {
        try {
            auto prov = make_provider(handle);
            auto responses = prov->complete(task.id, prompt, n_per_provider);
            const int limit = std::min<int>(n_per_provider, static_cast<int>(responses.size()));
            for (int i = 0; i < limit; ++i) {
                auto code = extract_candidate_code(responses[static_cast<std::size_t>(i)],
                                                   task.language);
                if (!code || code->empty()) continue;
                CandidateSolution c;
                c.task_id = task.id;
                c.source_code = *code;
                c.provider_label = prov->label();
                c.sample_index = i;
                c.prompt_fingerprint = fingerprint;
                candidates.push_back(std::move(c));
            }
        } catch (const Error& e) {
            ++failed;
            failures.push_back(handle.label + ": " + e.what());
        }
    }
    if (report) {
        report->providers_failed = failed;
        report->failures = std::move(failures);
        report->all_failed = !providers.empty() && failed == static_cast<int>(providers.size());
    }
    return candidates;
}

}  // namespace perfset::provider
