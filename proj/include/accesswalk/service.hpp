#pragma once

#include "accesswalk/accessibility.hpp"
#include "accesswalk/network.hpp"
#include "accesswalk/scenario.hpp"
#include "accesswalk/walk.hpp"

#include <json.hpp>

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace accesswalk {

struct ServiceConfig {
    WalkConfig walk;  ///< sources ignored; master seed fixed for the process
    AccessibilityOptions options;
    unsigned threads = 1;
    bool full_recompute = false;
};

enum class JobState { queued, running, done, failed };

const char* to_string(JobState state);

/// HTTP front end over one in-memory network.
///
/// Scenario jobs run one at a time on a background executor. Published
/// results are immutable and swapped in under a lock, so handlers only ever
/// see complete fields.
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    void publish_network(StreetNetwork net);

    /// Computes the baseline field on the calling thread.
    void compute_baseline();
    /// Queues the baseline computation on the job executor.
    void queue_baseline();
    bool baseline_ready() const;

    /// Validates and queues a scenario; returns the job id.
    std::string submit(const Scenario& scenario);

    bool bind(const std::string& host, int port);
    int bind_any_port(const std::string& host);
    /// Blocks serving requests until stop().
    bool listen();
    void stop();
    void wait_until_idle();

    /// Payload builders, shared by the HTTP handlers.
    nlohmann::json network_document() const;
    nlohmann::json accessibility_document(const AccessibilityField& field,
                                          const std::optional<std::string>& scenario) const;

private:
    struct Job {
        std::string id;
        JobState state = JobState::queued;
        double progress = 0.0;
        Scenario scenario;
        std::string error;
        std::shared_ptr<const ScenarioOutcome> result;
        nlohmann::json report;
    };

    void install_routes();
    void run_executor();
    void enqueue(std::function<void()> task);
    void run_job(const std::string& id);
    nlohmann::json job_document(const Job& job) const;
    std::size_t jobs_ahead(const std::string& id) const;

    ServiceConfig config_;
    std::unique_ptr<httplib::Server> server_;

    mutable std::mutex mutex_;
    std::shared_ptr<const StreetNetwork> network_;
    std::shared_ptr<const AccessibilityField> baseline_;
    std::map<std::string, Job> jobs_;
    std::deque<std::string> order_;  ///< queued/running job ids, FIFO
    std::size_t next_job_ = 1;

    std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::condition_variable idle_cv_;
    std::deque<std::function<void()>> tasks_;
    bool busy_ = false;
    bool shutting_down_ = false;
    std::thread executor_;
};

}  // namespace accesswalk
