#include "accesswalk/service.hpp"

#include <httplib.h>

#include <cmath>

namespace accesswalk {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& message)
{
    send_json(res, status, {{"error", message}});
}

}  // namespace

const char* to_string(JobState state)
{
    switch (state) {
    case JobState::queued: return "queued";
    case JobState::running: return "running";
    case JobState::done: return "done";
    case JobState::failed: return "failed";
    }
    return "?";
}

Service::Service(ServiceConfig config)
    : config_(std::move(config)), server_(std::make_unique<httplib::Server>())
{
    config_.walk.validate();
    config_.walk.sources.reset();
    // Plain SO_REUSEADDR: a port already in use must fail to bind.
    server_->set_socket_options([](auto sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    install_routes();
    executor_ = std::thread([this] { run_executor(); });
}

Service::~Service()
{
    stop();
    {
        std::lock_guard lock(queue_mutex_);
        shutting_down_ = true;
    }
    queue_cv_.notify_all();
    if (executor_.joinable()) executor_.join();
}

void Service::publish_network(StreetNetwork net)
{
    auto shared = std::make_shared<const StreetNetwork>(std::move(net));
    std::lock_guard lock(mutex_);
    network_ = std::move(shared);
    baseline_.reset();
}

void Service::compute_baseline()
{
    std::shared_ptr<const StreetNetwork> net;
    {
        std::lock_guard lock(mutex_);
        net = network_;
    }
    if (!net) throw std::logic_error("no network published");
    ExecutionOptions exec;
    exec.threads = config_.threads;
    auto field = std::make_shared<const AccessibilityField>(
        compute_accessibility(*net, config_.walk, config_.options, exec));
    std::lock_guard lock(mutex_);
    if (network_ == net) baseline_ = std::move(field);
}

void Service::queue_baseline()
{
    enqueue([this] { compute_baseline(); });
}

bool Service::baseline_ready() const
{
    std::lock_guard lock(mutex_);
    return baseline_ != nullptr;
}

std::string Service::submit(const Scenario& scenario)
{
    std::string id;
    {
        std::lock_guard lock(mutex_);
        if (!network_) throw std::logic_error("no network published");
        validate_scenario(*network_, scenario);
        id = "job-" + std::to_string(next_job_++);
        Job job;
        job.id = id;
        job.scenario = scenario;
        jobs_.emplace(id, std::move(job));
        order_.push_back(id);
    }
    enqueue([this, id] { run_job(id); });
    return id;
}

void Service::enqueue(std::function<void()> task)
{
    {
        std::lock_guard lock(queue_mutex_);
        tasks_.push_back(std::move(task));
    }
    queue_cv_.notify_all();
}

void Service::run_executor()
{
    for (;;) {
        std::function<void()> task;
        {
            std::unique_lock lock(queue_mutex_);
            queue_cv_.wait(lock, [&] { return shutting_down_ || !tasks_.empty(); });
            if (shutting_down_) return;
            task = std::move(tasks_.front());
            tasks_.pop_front();
            busy_ = true;
        }
        try {
            task();
        } catch (...) {
            // Job failures are recorded by run_job; a failed baseline stays unpublished.
        }
        {
            std::lock_guard lock(queue_mutex_);
            busy_ = false;
        }
        idle_cv_.notify_all();
    }
}

void Service::wait_until_idle()
{
    std::unique_lock lock(queue_mutex_);
    idle_cv_.wait(lock, [&] { return shutting_down_ || (tasks_.empty() && !busy_); });
}

void Service::run_job(const std::string& id)
{
    std::shared_ptr<const StreetNetwork> net;
    Scenario scenario;
    {
        std::lock_guard lock(mutex_);
        auto& job = jobs_.at(id);
        job.state = JobState::running;
        scenario = job.scenario;
        net = network_;
    }
    try {
        ExecutionOptions exec;
        exec.threads = config_.threads;
        exec.progress = [&](std::size_t done, std::size_t total) {
            std::lock_guard lock(mutex_);
            auto& job = jobs_.at(id);
            job.progress = std::max(job.progress, static_cast<double>(done) / total);
        };
        auto outcome = std::make_shared<const ScenarioOutcome>(evaluate_scenario(
            *net, scenario, config_.walk, config_.options, exec, config_.full_recompute));
        json report = report_to_json(outcome->report, scenario, *net);
        std::lock_guard lock(mutex_);
        auto& job = jobs_.at(id);
        job.result = std::move(outcome);
        job.report = std::move(report);
        job.progress = 1.0;
        job.state = JobState::done;
    } catch (const std::exception& e) {
        std::lock_guard lock(mutex_);
        auto& job = jobs_.at(id);
        job.error = e.what();
        job.state = JobState::failed;
    }
    std::lock_guard lock(mutex_);
    std::erase(order_, id);
}

std::size_t Service::jobs_ahead(const std::string& id) const
{
    std::size_t ahead = 0;
    for (const auto& other : order_) {
        if (other == id) return ahead;
        ++ahead;
    }
    return 0;
}

json Service::job_document(const Job& job) const
{
    json doc = {{"id", job.id},
                {"state", to_string(job.state)},
                {"progress", job.progress},
                {"scenario", network_ ? scenario_to_json(job.scenario, *network_) : json(nullptr)},
                {"error", job.error.empty() ? json(nullptr) : json(job.error)}};
    if (job.state == JobState::queued) doc["queue_position"] = jobs_ahead(job.id);
    if (job.state == JobState::done)
        doc["result"] = {{"comparison", "/api/scenarios/" + job.id + "/comparison"},
                         {"accessibility", "/api/accessibility?scenario=" + job.id}};
    return doc;
}

json Service::network_document() const
{
    std::lock_guard lock(mutex_);
    if (!network_) throw std::logic_error("no network published");
    const auto& net = *network_;
    json nodes = json::array();
    for (NodeId u = 0; u < net.node_count(); ++u) {
        json rec = {{"id", net.label(u)}, {"index", u}};
        rec["x"] = net.has_coordinates() ? json(net.position(u).x) : json(nullptr);
        rec["y"] = net.has_coordinates() ? json(net.position(u).y) : json(nullptr);
        nodes.push_back(std::move(rec));
    }
    json edges = json::array();
    for (auto [u, v] : net.edges()) edges.push_back({net.label(u), net.label(v)});
    return {{"node_count", net.node_count()},
            {"edge_count", net.edge_count()},
            {"has_coordinates", net.has_coordinates()},
            {"nodes", std::move(nodes)},
            {"edges", std::move(edges)}};
}

json Service::accessibility_document(const AccessibilityField& field,
                                     const std::optional<std::string>& scenario) const
{
    std::shared_ptr<const StreetNetwork> net;
    {
        std::lock_guard lock(mutex_);
        net = network_;
    }
    json nodes = json::array();
    for (NodeId u : field.nodes()) {
        auto oa = field.oa(u);
        nodes.push_back({{"id", net->label(u)},
                         {"index", u},
                         {"mean_oa", field.mean_oa(u)},
                         {"oa", std::vector<double>(oa.begin(), oa.end())}});
    }
    return {{"scenario", scenario ? json(*scenario) : json(nullptr)},
            {"steps", field.max_steps()},
            {"mean_steps", {field.mean_from(), field.mean_to()}},
            {"complete", field.complete()},
            {"nodes", std::move(nodes)}};
}

void Service::install_routes()
{
    auto& srv = *server_;

    srv.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
        std::lock_guard lock(mutex_);
        send_json(res, 200,
                  {{"status", "ok"},
                   {"network_loaded", network_ != nullptr},
                   {"baseline_ready", baseline_ != nullptr}});
    });

    srv.Get("/api/network", [this](const httplib::Request&, httplib::Response& res) {
        {
            std::lock_guard lock(mutex_);
            if (!network_) return send_error(res, 503, "network not loaded yet");
        }
        send_json(res, 200, network_document());
    });

    srv.Get("/api/accessibility", [this](const httplib::Request& req, httplib::Response& res) {
        std::shared_ptr<const AccessibilityField> field;
        std::optional<std::string> scenario;
        {
            std::lock_guard lock(mutex_);
            if (!network_) return send_error(res, 503, "network not loaded yet");
            if (req.has_param("scenario")) {
                scenario = req.get_param_value("scenario");
                auto it = jobs_.find(*scenario);
                if (it == jobs_.end()) return send_error(res, 404, "unknown scenario " + *scenario);
                if (it->second.state == JobState::failed)
                    return send_error(res, 409, "scenario job failed: " + it->second.error);
                if (it->second.state != JobState::done)
                    return send_error(res, 409, "scenario job not finished");
                auto outcome = it->second.result;
                field = std::shared_ptr<const AccessibilityField>(outcome, &outcome->enhanced);
            } else {
                if (!baseline_) return send_error(res, 409, "baseline accessibility not computed yet");
                field = baseline_;
            }
        }
        send_json(res, 200, accessibility_document(*field, scenario));
    });

    srv.Post("/api/scenarios", [this](const httplib::Request& req, httplib::Response& res) {
        std::shared_ptr<const StreetNetwork> net;
        {
            std::lock_guard lock(mutex_);
            net = network_;
        }
        if (!net) return send_error(res, 503, "network not loaded yet");
        try {
            Scenario scenario = parse_scenario(req.body, *net);
            std::string id = submit(scenario);
            std::lock_guard lock(mutex_);
            const auto& job = jobs_.at(id);
            json body = {{"job_id", id}, {"state", to_string(job.state)}};
            if (job.state == JobState::queued) body["queue_position"] = jobs_ahead(id);
            send_json(res, 202, body);
        } catch (const ScenarioError& e) {
            send_error(res, 400, e.what());
        }
    });

    srv.Get(R"(/api/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(mutex_);
        auto it = jobs_.find(req.matches[1]);
        if (it == jobs_.end()) return send_error(res, 404, "unknown job " + std::string(req.matches[1]));
        send_json(res, 200, job_document(it->second));
    });

    srv.Get(R"(/api/scenarios/([^/]+)/comparison)",
            [this](const httplib::Request& req, httplib::Response& res) {
                std::lock_guard lock(mutex_);
                auto it = jobs_.find(req.matches[1]);
                if (it == jobs_.end())
                    return send_error(res, 404, "unknown scenario " + std::string(req.matches[1]));
                const auto& job = it->second;
                if (job.state == JobState::failed)
                    return send_error(res, 409, "scenario job failed: " + job.error);
                if (job.state != JobState::done)
                    return send_error(res, 409, "scenario job not finished");
                send_json(res, 200, job.report);
            });
}

bool Service::bind(const std::string& host, int port)
{
    return server_->bind_to_port(host, port);
}

int Service::bind_any_port(const std::string& host)
{
    return server_->bind_to_any_port(host);
}

bool Service::listen()
{
    return server_->listen_after_bind();
}

void Service::stop()
{
    if (server_) server_->stop();
}

}  // namespace accesswalk
