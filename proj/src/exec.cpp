#include "perfset/exec.hpp"

#include <fcntl.h>
#include <sched.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/utsname.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "perfset/error.hpp"
#include "perfset/util.hpp"

namespace perfset::exec {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kTailBytes = 4096;
constexpr double kCompileTimeoutS = 120.0;

double elapsed_s(Clock::time_point since) {
    return std::chrono::duration<double>(Clock::now() - since).count();
}

// Runs a short trusted command and captures combined output. Probe-only; the
// profiled workloads go through the supervised spawn path below.
std::pair<int, std::string> run_capture(const std::string& command) {
    std::string cmd = command + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, "popen failed"};
    std::string out;
    char buf[512];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    int rc = pclose(pipe);
    return {rc, out};
}

std::string first_line(const std::string& text) {
    auto pos = text.find('\n');
    return pos == std::string::npos ? text : text.substr(0, pos);
}

std::string cpu_model() {
    std::ifstream in("/proc/cpuinfo");
    std::string line;
    while (std::getline(in, line)) {
        if (util::starts_with(line, "model name")) {
            auto pos = line.find(':');
            if (pos != std::string::npos) return util::trim(line.substr(pos + 1));
        }
    }
    return "unknown-cpu";
}

// ---------------------------------------------------------------------------
// Process-tree RSS sampling via /proc.
// ---------------------------------------------------------------------------

struct ProcStat {
    char state = '?';
    long rss_pages = 0;
};

bool read_proc_stat(pid_t pid, ProcStat& out) {
    std::string path = "/proc/" + std::to_string(pid) + "/stat";
    std::ifstream in(path);
    if (!in) return false;
    std::string content;
    std::getline(in, content);
    // comm may contain spaces; state follows the closing paren.
    auto close = content.rfind(')');
    if (close == std::string::npos || close + 2 >= content.size()) return false;
    std::istringstream rest(content.substr(close + 2));
    std::string field;
    // fields after state, 1-indexed from state=3: rss is field 24 overall.
    rest >> out.state;
    for (int i = 4; i <= 23; ++i) {
        if (!(rest >> field)) return false;
    }
    if (!(rest >> out.rss_pages)) return false;
    return true;
}

void collect_children(pid_t pid, std::vector<pid_t>& out) {
    std::string task_dir = "/proc/" + std::to_string(pid) + "/task";
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(task_dir, ec)) {
        std::ifstream in(entry.path() / "children");
        pid_t child;
        while (in >> child) out.push_back(child);
    }
}

// Per-process high-water RSS in MB. Unlike wait4's ru_maxrss, VmHWM resets
// when the child execs, so it reflects the profiled program itself rather
// than the launcher's forked image.
std::optional<double> vm_hwm_mb(pid_t pid) {
    std::ifstream in("/proc/" + std::to_string(pid) + "/status");
    if (!in) return std::nullopt;
    std::string line;
    while (std::getline(in, line)) {
        if (util::starts_with(line, "VmHWM:")) {
            std::istringstream fields(line.substr(6));
            long kb = 0;
            fields >> kb;
            return static_cast<double>(kb) / 1024.0;
        }
    }
    return std::nullopt;
}

// Resident memory of pid plus all transitive children, in MB. Zombies hold no
// memory and are skipped. Returns nullopt once the root process is gone.
std::optional<double> tree_rss_mb(pid_t root) {
    static const long page_size = sysconf(_SC_PAGESIZE);
    ProcStat st;
    if (!read_proc_stat(root, st)) return std::nullopt;
    if (st.state == 'Z' || st.state == 'X') return std::nullopt;
    long pages = st.rss_pages;
    std::vector<pid_t> frontier{root};
    std::size_t cursor = 0;
    while (cursor < frontier.size()) {
        pid_t pid = frontier[cursor++];
        std::vector<pid_t> kids;
        collect_children(pid, kids);
        for (pid_t kid : kids) {
            ProcStat kst;
            if (read_proc_stat(kid, kst) && kst.state != 'Z' && kst.state != 'X') {
                pages += kst.rss_pages;
                frontier.push_back(kid);
            }
        }
        if (frontier.size() > 256) break;  // runaway fork bomb; the cap kill handles it
    }
    return static_cast<double>(pages) * static_cast<double>(page_size) / (1024.0 * 1024.0);
}

// SIGKILL to the child's process group; falls back to the single pid if the
// group was never established.
void kill_tree(pid_t pid) {
    if (getpgid(pid) == pid) kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
}

// ---------------------------------------------------------------------------
// Supervised spawn.
// ---------------------------------------------------------------------------

struct SpawnOutcome {
    bool launched = false;
    std::string launch_error;
    int wait_status = 0;
    bool killed_timeout = false;
    bool killed_memory = false;
    double wall_time_s = 0.0;
    std::vector<MemorySample> samples;
    double hwm_mb = 0.0;         // max VmHWM seen while sampling
    double rusage_peak_mb = 0.0; // ru_maxrss; includes the pre-exec fork image
};

SpawnOutcome supervise(const std::vector<std::string>& argv, const std::string& workdir,
                       const ResourceLimits& limits,
                       const std::vector<std::pair<std::string, std::string>>& extra_env,
                       bool sample_memory) {
    SpawnOutcome outcome;

    int err_pipe[2];
    if (pipe2(err_pipe, O_CLOEXEC) != 0) {
        outcome.launch_error = std::string("pipe2: ") + std::strerror(errno);
        return outcome;
    }

    std::vector<char*> c_argv;
    c_argv.reserve(argv.size() + 1);
    for (const auto& a : argv) c_argv.push_back(const_cast<char*>(a.c_str()));
    c_argv.push_back(nullptr);

    const std::string stdout_path = workdir + "/stdout.log";
    const std::string stderr_path = workdir + "/stderr.log";

    pid_t pid = fork();
    if (pid < 0) {
        close(err_pipe[0]);
        close(err_pipe[1]);
        outcome.launch_error = std::string("fork: ") + std::strerror(errno);
        return outcome;
    }
    if (pid == 0) {
        close(err_pipe[0]);
        setpgid(0, 0);
        if (!limits.cpu_affinity.empty()) {
            cpu_set_t set;
            CPU_ZERO(&set);
            for (int core : limits.cpu_affinity) CPU_SET(core, &set);
            sched_setaffinity(0, sizeof(set), &set);
        }
        if (limits.deny_network) {
            // Best effort: a fresh, interface-less network namespace when the
            // kernel lets us; profiling proceeds unsandboxed otherwise.
            unshare(CLONE_NEWNET);
        }
        if (chdir(workdir.c_str()) != 0) _exit(125);
        int devnull = open("/dev/null", O_RDONLY);
        if (devnull >= 0) dup2(devnull, STDIN_FILENO);
        int out_fd = open(stdout_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        int err_fd = open(stderr_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (out_fd >= 0) dup2(out_fd, STDOUT_FILENO);
        if (err_fd >= 0) dup2(err_fd, STDERR_FILENO);
        struct rlimit no_core {0, 0};
        setrlimit(RLIMIT_CORE, &no_core);
        for (const auto& [k, v] : extra_env) setenv(k.c_str(), v.c_str(), 1);
        execvp(c_argv[0], c_argv.data());
        int saved = errno;
        ssize_t ignored = write(err_pipe[1], &saved, sizeof(saved));
        (void)ignored;
        _exit(127);
    }

    // Parent. Mirror the child's setpgid so kill_tree is race-free.
    setpgid(pid, pid);
    close(err_pipe[1]);
    const Clock::time_point start = Clock::now();

    std::atomic<bool> done{false};
    std::atomic<int> kill_reason{0};  // 1 = timeout, 2 = memory

    std::thread sampler([&] {
        const auto interval =
            std::chrono::duration<double, std::milli>(std::max(1.0, limits.mem_sample_interval_ms));
        double last_t = -1.0;
        // Skip the pre-exec fork image: its RSS mirrors the parent and would
        // corrupt the first sample. One interval is enough for exec to land.
        std::this_thread::sleep_for(interval);
        while (!done.load(std::memory_order_relaxed)) {
            const double t = elapsed_s(start);
            if (sample_memory) {
                auto rss = tree_rss_mb(pid);
                if (rss && t > last_t) {
                    outcome.samples.push_back(MemorySample{t, *rss});
                    last_t = t;
                }
                if (auto hwm = vm_hwm_mb(pid)) {
                    outcome.hwm_mb = std::max(outcome.hwm_mb, *hwm);
                }
                if (rss && *rss > limits.memory_cap_mb && kill_reason.load() == 0) {
                    kill_reason.store(2);
                    kill_tree(pid);
                }
            }
            if (t > limits.wall_timeout_s && kill_reason.load() == 0) {
                kill_reason.store(1);
                kill_tree(pid);
            }
            std::this_thread::sleep_for(interval);
        }
    });

    struct rusage ru {};
    int status = 0;
    pid_t waited = wait4(pid, &status, 0, &ru);
    outcome.wall_time_s = elapsed_s(start);
    done.store(true, std::memory_order_relaxed);
    sampler.join();
    kill_tree(pid);  // stragglers in the group, if any

    if (waited != pid) {
        outcome.launch_error = std::string("wait4: ") + std::strerror(errno);
        return outcome;
    }

    int exec_errno = 0;
    if (read(err_pipe[0], &exec_errno, sizeof(exec_errno)) == sizeof(exec_errno)) {
        close(err_pipe[0]);
        outcome.launch_error =
            "exec " + argv[0] + " failed: " + std::strerror(exec_errno);
        return outcome;
    }
    close(err_pipe[0]);

    outcome.launched = true;
    outcome.wait_status = status;
    outcome.killed_timeout = kill_reason.load() == 1;
    outcome.killed_memory = kill_reason.load() == 2;
    outcome.rusage_peak_mb = static_cast<double>(ru.ru_maxrss) / 1024.0;

    // Samples taken while the exit was being reaped can carry timestamps past
    // the recorded wall time; drop them to keep the profile invariant.
    while (!outcome.samples.empty() && outcome.samples.back().t_s > outcome.wall_time_s) {
        outcome.samples.pop_back();
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// Per-language drivers.
// ---------------------------------------------------------------------------

std::string join_tests(const std::vector<TestCase>& tests, const std::string& sep) {
    std::string out;
    for (const auto& t : tests) {
        out += t.body;
        out += sep;
    }
    return out;
}

bool contains_token(const std::string& source, const std::string& token) {
    return source.find(token) != std::string::npos;
}

struct DriverFiles {
    std::vector<std::string> compile_argv;  // empty = nothing to compile
    std::vector<std::string> run_argv;
    std::vector<std::pair<std::string, std::string>> env;
};

DriverFiles write_python_driver(const ToolchainInfo& tc, const std::string& source,
                                const std::vector<TestCase>& tests, const std::string& workdir) {
    std::string program = source;
    if (!tests.empty()) {
        program += "\n\n";
        program += join_tests(tests, "\n");
    }
    util::write_file(workdir + "/driver.py", program);
    return DriverFiles{{}, {tc.command, "driver.py"}, {}};
}

DriverFiles write_cpp_driver(const ToolchainInfo& tc, const std::string& source,
                             const std::vector<TestCase>& tests, const std::string& workdir) {
    std::string program = "#include <cassert>\n";
    program += source;
    if (!tests.empty() || !contains_token(source, "int main")) {
        program += "\n\nint main() {\n";
        program += join_tests(tests, "\n");
        program += "\nreturn 0;\n}\n";
    }
    util::write_file(workdir + "/driver.cpp", program);
    return DriverFiles{{tc.command, "-O2", "-std=c++17", "driver.cpp", "-o", "prog"},
                       {"./prog"},
                       {}};
}

DriverFiles write_rust_driver(const ToolchainInfo& tc, const std::string& source,
                              const std::vector<TestCase>& tests, const std::string& workdir) {
    std::string program = source;
    if (!tests.empty() || !contains_token(source, "fn main")) {
        program += "\n\nfn main() {\n";
        program += join_tests(tests, "\n");
        program += "\n}\n";
    }
    util::write_file(workdir + "/driver.rs", program);
    return DriverFiles{{tc.command, "-O", "--edition=2021", "driver.rs", "-o", "prog"},
                       {"./prog"},
                       {}};
}

DriverFiles write_go_driver(const ToolchainInfo& tc, const std::string& source,
                            const std::vector<TestCase>& tests, const std::string& workdir) {
    std::string program = source;
    static const std::regex package_re(R"(^\s*package\s+\w+)");
    if (!std::regex_search(program, package_re)) {
        program = "package main\n\n" + program;
    } else {
        program = std::regex_replace(program, package_re, "package main",
                                     std::regex_constants::format_first_only);
    }
    if (!tests.empty() || !contains_token(program, "func main")) {
        program += "\n\nfunc main() {\n";
        program += join_tests(tests, "\n");
        program += "\n}\n";
    }
    util::write_file(workdir + "/main.go", program);
    return DriverFiles{{tc.command, "build", "-o", "prog", "main.go"},
                       {"./prog"},
                       {{"GOCACHE", workdir + "/.gocache"}, {"GOFLAGS", "-mod=mod"}}};
}

DriverFiles write_java_driver(const ToolchainInfo& tc, const std::string& source,
                              const std::vector<TestCase>& tests, const std::string& workdir) {
    // Place the solution in a file named after its first public class; wrap
    // classless snippets into `public class Solution`.
    static const std::regex class_re(R"(public\s+class\s+(\w+))");
    static const std::regex any_class_re(R"(class\s+(\w+))");
    std::smatch m;
    std::string class_name;
    std::string solution = source;
    if (std::regex_search(source, m, class_re)) {
        class_name = m[1];
    } else if (std::regex_search(source, m, any_class_re)) {
        class_name = m[1];
    } else {
        class_name = "Solution";
        solution = "public class Solution {\n" + source + "\n}\n";
    }
    util::write_file(workdir + "/" + class_name + ".java", solution);
    std::string driver = "public class Main {\n  public static void main(String[] args) throws Exception {\n";
    driver += join_tests(tests, "\n");
    driver += "\n  }\n}\n";
    util::write_file(workdir + "/Main.java", driver);
    return DriverFiles{{"javac", "Main.java", class_name + ".java"},
                       {"java", "-ea", "-cp", ".", "Main"},
                       {}};
}

DriverFiles write_driver(Language lang, const ToolchainInfo& tc, const std::string& source,
                         const std::vector<TestCase>& tests, const std::string& workdir) {
    switch (lang) {
        case Language::python: return write_python_driver(tc, source, tests, workdir);
        case Language::cpp: return write_cpp_driver(tc, source, tests, workdir);
        case Language::rust: return write_rust_driver(tc, source, tests, workdir);
        case Language::go: return write_go_driver(tc, source, tests, workdir);
        case Language::java: return write_java_driver(tc, source, tests, workdir);
    }
    throw environment_error("unsupported_language", "no runner for language");
}

// ---------------------------------------------------------------------------
// Status classification. Total: every run maps to exactly one status.
// ---------------------------------------------------------------------------

bool matches_any(const std::string& text, std::initializer_list<const char*> needles) {
    for (const char* n : needles) {
        if (text.find(n) != std::string::npos) return true;
    }
    return false;
}

bool assertion_marker(Language lang, const std::string& stderr_tail) {
    switch (lang) {
        case Language::python: return matches_any(stderr_tail, {"AssertionError"});
        case Language::cpp: return matches_any(stderr_tail, {"Assertion", "assertion"});
        case Language::rust: return matches_any(stderr_tail, {"assertion"});
        case Language::java: return matches_any(stderr_tail, {"AssertionError"});
        case Language::go: return matches_any(stderr_tail, {"assertion failed"});
    }
    return false;
}

bool late_compile_marker(Language lang, const std::string& stderr_tail) {
    // Interpreted languages surface syntax problems at run time.
    if (lang == Language::python) {
        return matches_any(stderr_tail, {"SyntaxError", "IndentationError", "TabError"});
    }
    return false;
}

RunStatus classify(Language lang, const SpawnOutcome& outcome, const std::string& stderr_tail) {
    if (outcome.killed_memory) return RunStatus::memory_exceeded;
    if (outcome.killed_timeout) return RunStatus::timeout;
    const bool asserted = assertion_marker(lang, stderr_tail);
    if (WIFEXITED(outcome.wait_status) && WEXITSTATUS(outcome.wait_status) == 0) {
        return asserted ? RunStatus::failed_assertion : RunStatus::passed;
    }
    if (late_compile_marker(lang, stderr_tail)) return RunStatus::compile_error;
    if (asserted) return RunStatus::failed_assertion;
    return RunStatus::runtime_error;
}

}  // namespace

// ---------------------------------------------------------------------------
// ToolchainRegistry
// ---------------------------------------------------------------------------

namespace {

ToolchainInfo probe_command(const std::vector<std::string>& candidates,
                            const std::string& version_flag) {
    ToolchainInfo info;
    std::string attempts;
    for (const auto& cmd : candidates) {
        auto [rc, out] = run_capture(cmd + " " + version_flag);
        if (rc == 0) {
            info.available = true;
            info.command = cmd;
            info.version = util::trim(first_line(out));
            return info;
        }
        attempts += "  " + cmd + ": " + util::trim(first_line(out)) + "\n";
    }
    info.detail = attempts.empty() ? "no candidate commands\n" : attempts;
    return info;
}

std::string version_token(const std::string& version_line) {
    static const std::regex num_re(R"((\d+\.\d+(\.\d+)?))");
    std::smatch m;
    if (std::regex_search(version_line, m, num_re)) return m[1];
    return version_line.empty() ? "?" : version_line;
}

}  // namespace

ToolchainRegistry::ToolchainRegistry() {
    info_[Language::python] = probe_command({"python3", "python"}, "--version");
    info_[Language::cpp] = probe_command({"g++", "clang++"}, "--version");
    info_[Language::java] = probe_command({"javac"}, "-version");
    if (info_[Language::java].available) {
        // Running also needs the JVM, not just the compiler.
        auto jvm = probe_command({"java"}, "-version");
        if (!jvm.available) {
            info_[Language::java].available = false;
            info_[Language::java].detail = "javac found but java missing:\n" + jvm.detail;
        }
    }
    info_[Language::rust] = probe_command({"rustc"}, "--version");
    info_[Language::go] = probe_command({"go"}, "version");

    struct utsname un {};
    uname(&un);
    std::string label = std::string(un.sysname) + "-" + un.machine + ";" + cpu_model();
    for (const auto& [lang, tc] : info_) {
        if (tc.available) {
            label += ";" + to_string(lang) + "=" + tc.command + " " + version_token(tc.version);
        }
    }
    environment_label_ = label;
}

const ToolchainRegistry& ToolchainRegistry::instance() {
    static ToolchainRegistry registry;
    return registry;
}

const ToolchainInfo& ToolchainRegistry::for_language(Language lang) const {
    return info_.at(lang);
}

const ToolchainInfo& ToolchainRegistry::require(Language lang) const {
    const ToolchainInfo& info = info_.at(lang);
    if (!info.available) {
        throw environment_error("toolchain_missing",
                                "no toolchain for " + to_string(lang) +
                                    "; probe results:\n" + probe_report());
    }
    return info;
}

std::string ToolchainRegistry::probe_report() const {
    std::string out;
    for (const auto& [lang, tc] : info_) {
        out += to_string(lang) + ": ";
        if (tc.available) {
            out += tc.command + " (" + tc.version + ")\n";
        } else {
            out += "unavailable\n" + tc.detail;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// prepare / run_once / measure
// ---------------------------------------------------------------------------

RunnablePlan prepare(Language language, const std::string& source_code,
                     const std::vector<TestCase>& tests, const std::string& workdir) {
    const ToolchainInfo& tc = ToolchainRegistry::instance().require(language);
    fs::create_directories(workdir);

    RunnablePlan plan;
    plan.language = language;
    plan.workdir = fs::absolute(workdir).string();

    DriverFiles files = write_driver(language, tc, source_code, tests, plan.workdir);
    plan.argv = files.run_argv;
    plan.env = files.env;

    if (!files.compile_argv.empty()) {
        ResourceLimits compile_limits;
        compile_limits.wall_timeout_s = kCompileTimeoutS;
        compile_limits.memory_cap_mb = 8192.0;
        compile_limits.mem_sample_interval_ms = 200.0;
        compile_limits.deny_network = false;  // toolchains may probe the filesystem oddly
        const auto started = Clock::now();
        SpawnOutcome out =
            supervise(files.compile_argv, plan.workdir, compile_limits, files.env, false);
        plan.compile_time_s = elapsed_s(started);
        if (!out.launched) {
            throw environment_error("compiler_launch", out.launch_error);
        }
        if (!(WIFEXITED(out.wait_status) && WEXITSTATUS(out.wait_status) == 0)) {
            plan.compile_failed = true;
            plan.compile_diagnostics = util::read_file_tail(plan.workdir + "/stderr.log", kTailBytes);
            if (out.killed_timeout) plan.compile_diagnostics += "\n(compile timed out)";
        }
    }
    return plan;
}

ExecutionProfile run_once(const RunnablePlan& plan, const ResourceLimits& limits) {
    ExecutionProfile profile;
    profile.environment_label = ToolchainRegistry::instance().environment_label();

    if (plan.compile_failed) {
        profile.status = RunStatus::compile_error;
        profile.stderr_tail = plan.compile_diagnostics;
        return profile;
    }

    SpawnOutcome out = supervise(plan.argv, plan.workdir, limits, plan.env, true);
    if (!out.launched) {
        throw environment_error("launch_failed", out.launch_error);
    }

    profile.wall_time_s = out.wall_time_s;
    profile.samples = std::move(out.samples);
    profile.stdout_tail = util::read_file_tail(plan.workdir + "/stdout.log", kTailBytes);
    profile.stderr_tail = util::read_file_tail(plan.workdir + "/stderr.log", kTailBytes);
    profile.exit_code = WIFEXITED(out.wait_status) ? WEXITSTATUS(out.wait_status) : -1;

    // Runs shorter than the sampling interval produce no samples. Fall back to
    // a single point from ru_maxrss so the profile is never empty for a
    // completed run; that counter includes the launcher's forked image, so it
    // overestimates for tiny programs (documented per-runner).
    if (profile.samples.empty() && profile.wall_time_s > 0.0) {
        profile.samples.push_back(MemorySample{profile.wall_time_s, out.rusage_peak_mb});
        profile.peak_mb = out.rusage_peak_mb;
    } else {
        double sample_peak = 0.0;
        for (const auto& s : profile.samples) sample_peak = std::max(sample_peak, s.rss_mb);
        profile.peak_mb = std::max(sample_peak, out.hwm_mb);
    }

    profile.status = classify(plan.language, out, profile.stderr_tail);
    return profile;
}

std::vector<ExecutionProfile> measure(const RunnablePlan& plan, const ResourceLimits& limits,
                                      int repeats) {
    if (repeats < 1) throw input_error("bad_argument", "repeats must be >= 1");
    std::vector<ExecutionProfile> profiles;
    profiles.reserve(static_cast<std::size_t>(repeats));
    for (int i = 0; i < repeats; ++i) {
        profiles.push_back(run_once(plan, limits));
    }
    return profiles;
}

// ---------------------------------------------------------------------------
// LocalExecutionService
// ---------------------------------------------------------------------------

LocalExecutionService::LocalExecutionService(std::string workroot, bool keep_workdirs)
    : workroot_(std::move(workroot)), keep_workdirs_(keep_workdirs) {
    if (workroot_.empty()) {
        workroot_ = (fs::temp_directory_path() / "perfset-exec").string();
    }
    fs::create_directories(workroot_);
}

std::string LocalExecutionService::make_workdir() {
    std::string tmpl = workroot_ + "/run.XXXXXX";
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) {
        throw environment_error("workdir", std::string("mkdtemp: ") + std::strerror(errno));
    }
    return std::string(buf.data());
}

ExecutionProfile LocalExecutionService::run_solution(Language language,
                                                     const std::string& source_code,
                                                     const std::vector<TestCase>& tests,
                                                     const ResourceLimits& limits) {
    std::string workdir = make_workdir();
    ExecutionProfile profile;
    try {
        RunnablePlan plan = prepare(language, source_code, tests, workdir);
        profile = run_once(plan, limits);
    } catch (...) {
        if (!keep_workdirs_) fs::remove_all(workdir);
        throw;
    }
    if (!keep_workdirs_) fs::remove_all(workdir);
    return profile;
}

std::vector<ExecutionProfile> LocalExecutionService::measure_solution(
    Language language, const std::string& source_code, const std::vector<TestCase>& tests,
    const ResourceLimits& limits, int repeats) {
    std::string workdir = make_workdir();
    std::vector<ExecutionProfile> profiles;
    try {
        RunnablePlan plan = prepare(language, source_code, tests, workdir);
        profiles = measure(plan, limits, repeats);
    } catch (...) {
        if (!keep_workdirs_) fs::remove_all(workdir);
        throw;
    }
    if (!keep_workdirs_) fs::remove_all(workdir);
    return profiles;
}

double LocalExecutionService::baseline_mb(Language language, const ResourceLimits& limits) {
    auto it = baseline_cache_.find(language);
    if (it != baseline_cache_.end()) return it->second;

    // Empty programs exit within milliseconds; sample as fast as we can so the
    // baseline comes from the live process rather than the rusage fallback.
    exec::ResourceLimits baseline_limits = limits;
    baseline_limits.mem_sample_interval_ms = 1.0;

    std::string source;
    switch (language) {
        case Language::python: source = "pass\n"; break;
        case Language::cpp: source = "int main() { return 0; }\n"; break;
        case Language::rust: source = "fn main() {}\n"; break;
        case Language::go: source = "package main\n\nfunc main() {}\n"; break;
        case Language::java:
            source = "public class Solution { public static void main(String[] a) {} }\n";
            break;
    }
    ExecutionProfile profile = run_solution(language, source, {}, baseline_limits);
    double baseline = profile.status == RunStatus::passed ? profile.peak_mb : 0.0;
    baseline_cache_[language] = baseline;
    return baseline;
}

}  // namespace perfset::exec
