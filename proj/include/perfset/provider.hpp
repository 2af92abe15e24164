#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "perfset/record.hpp"

namespace perfset::provider {

enum class ProviderKind { http_chat, replay };

struct ProviderHandle {
    ProviderKind kind = ProviderKind::replay;
    std::string label;          // attribution label on emitted candidates
    std::string endpoint;       // http_chat: chat-completions URL
    std::string model_name;     // http_chat
    std::string api_key_env;    // name of the env var holding the bearer token
    int max_retries = 3;
    double request_timeout_s = 60.0;
    double rate_limit_per_min = 60.0;
    double temperature = 0.2;
    int retry_backoff_ms = 500;
    std::string replay_root;    // replay: directory of stored responses
};

// Validates the per-kind required fields; throws config errors otherwise.
void validate(const ProviderHandle& handle);

struct CandidateSolution {
    std::string task_id;
    std::string source_code;
    std::string provider_label;
    int sample_index = 0;
    std::string prompt_fingerprint;

    bool operator==(const CandidateSolution&) const = default;
};

nlohmann::json to_json(const CandidateSolution& c);
CandidateSolution candidate_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Providers. complete() returns up to n raw response texts for one task.
// The replay provider reads replay_root/<task_id>/<label>/<index>.txt and is
// fully deterministic; the http provider speaks the OpenAI-compatible
// chat-completions contract with retry/backoff and request pacing.
// ---------------------------------------------------------------------------

class Provider {
public:
    virtual ~Provider() = default;
    virtual const std::string& label() const = 0;
    virtual std::vector<std::string> complete(const std::string& task_id,
                                              const std::string& prompt, int n) = 0;
};

std::unique_ptr<Provider> make_provider(const ProviderHandle& handle);

// Seeds the jitter RNG used by retry backoff (pipeline determinism knob).
void set_retry_jitter_seed(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Prompts.
// ---------------------------------------------------------------------------

// Built-in completion-prompt template; a template file can override it.
// Placeholders: {{prompt}} (the task instruction) and {{language}}.
std::string default_completion_template();
// Built-in test-synthesis template. Placeholders: {{instruction}},
// {{solution}}, {{language}}.
std::string default_test_synthesis_template();

std::string build_prompt(const Task& task, const std::string& template_text);
std::string render_test_synthesis_prompt(const Task& task, const std::string& template_text);

std::string prompt_fingerprint(const std::string& prompt);

// ---------------------------------------------------------------------------
// Code extraction from fenced blocks.
// ---------------------------------------------------------------------------

struct CodeBlock {
    std::string info;  // fence info string, lowercased
    std::string body;
};

std::vector<CodeBlock> extract_code_blocks(const std::string& text);

// First fenced block whose info string matches the language, else the first
// block of any language, else nothing. Never includes fence markers or prose.
std::optional<std::string> extract_candidate_code(const std::string& response, Language language);

// ---------------------------------------------------------------------------
// Candidate generation.
// ---------------------------------------------------------------------------

struct GenerationReport {
    int providers_failed = 0;
    bool all_failed = false;  // task must be flagged generation_failed
    std::vector<std::string> failures;
};

std::vector<CandidateSolution> generate_candidates(const Task& task,
                                                   const std::vector<ProviderHandle>& providers,
                                                   int n_per_provider,
                                                   const std::string& template_text,
                                                   GenerationReport* report = nullptr);

}  // namespace perfset::provider
