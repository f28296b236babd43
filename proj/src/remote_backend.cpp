#include <httplib.h>

#include <cmath>
#include <regex>
#include <thread>

#include "sarceval/backend.hpp"
#include "sarceval/detail/random.hpp"

namespace sarceval {

using Clock = std::chrono::steady_clock;

RateLimiter::RateLimiter(double per_second)
    : rate_(per_second), capacity_(std::max(1.0, per_second)), tokens_(capacity_), last_(Clock::now()) {}

void RateLimiter::acquire() {
    if (rate_ <= 0.0) return;
    while (true) {
        std::chrono::duration<double> wait{};
        {
            std::lock_guard lock(mu_);
            const auto now = Clock::now();
            tokens_ = std::min(capacity_, tokens_ + rate_ * std::chrono::duration<double>(now - last_).count());
            last_ = now;
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
        }
        std::this_thread::sleep_for(wait);
    }
}

struct RemoteBackend::Endpoint {
    std::string scheme_host_port;
    std::string path;
};

RemoteBackend::RemoteBackend(RemoteOptions opts, Sleeper sleeper)
    : opts_(std::move(opts)),
      sleeper_(std::move(sleeper)),
      in_flight_(std::max(1, opts_.max_in_flight)),
      limiter_(opts_.rate_limit),
      rng_state_(opts_.jitter_seed) {
    if (opts_.api_key.empty()) {
        throw BackendError(BackendError::Kind::Configuration, 0, "remote backend: API key is not set");
    }
    if (opts_.retry.max_attempts < 1) {
        throw BackendError(BackendError::Kind::Configuration, 0, "remote backend: max_attempts must be >= 1");
    }
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(opts_.endpoint_url, m, url_re)) {
        throw BackendError(BackendError::Kind::Configuration, 0,
                           "remote backend: malformed endpoint URL '" + opts_.endpoint_url + "'");
    }
    endpoint_ = std::make_unique<Endpoint>(Endpoint{m[1].str(), m[2].matched ? m[2].str() : "/"});
    if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

RemoteBackend::~RemoteBackend() = default;

std::chrono::milliseconds RemoteBackend::backoff_ceiling(const RetryPolicy& p, int attempt) {
    const double ms = static_cast<double>(p.backoff_base.count()) * std::pow(p.backoff_factor, attempt - 1);
    return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

namespace {

ChatResponse parse_completion(const std::string& body, int attempt) {
    auto fail = [attempt](const std::string& why) {
        return BackendError(BackendError::Kind::Protocol, attempt, "malformed completion response: " + why);
    };
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) throw fail("body is not JSON");
    try {
        const auto& choice = j.at("choices").at(0);
        ChatResponse r;
        r.content = choice.at("message").at("content").get<std::string>();
        const auto& fr = choice.value("finish_reason", nlohmann::json());
        r.finish_reason = fr.is_string() ? fr.get<std::string>() : "";
        r.attempt_count = attempt;
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw fail(e.what());
    }
}

}  // namespace

ChatResponse RemoteBackend::complete(const ChatRequest& req) {
    req.validate();
    calls_.fetch_add(1);
    const std::string body = to_json(req).dump();
    const httplib::Headers headers{{"Authorization", "Bearer " + opts_.api_key}};
    const auto start = Clock::now();
    const auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(opts_.timeout);
    const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(opts_.timeout - timeout_s);

    std::string last_error;
    for (int attempt = 1; attempt <= opts_.retry.max_attempts; ++attempt) {
        limiter_.acquire();
        httplib::Result res{nullptr, httplib::Error::Unknown};
        {
            in_flight_.acquire();
            httplib::Client client(endpoint_->scheme_host_port);
            client.set_connection_timeout(timeout_s.count(), timeout_us.count());
            client.set_read_timeout(timeout_s.count(), timeout_us.count());
            client.set_write_timeout(timeout_s.count(), timeout_us.count());
            res = client.Post(endpoint_->path, headers, body, "application/json");
            in_flight_.release();
        }

        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
        } else if (res->status == 200) {
            auto out = parse_completion(res->body, attempt);
            out.latency_ms =
                static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
            return out;
        } else if (res->status == 401 || res->status == 403) {
            throw BackendError(BackendError::Kind::Authentication, attempt,
                               "authentication failed (HTTP " + std::to_string(res->status) + ")");
        } else if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
        } else {
            throw BackendError(BackendError::Kind::Protocol, attempt,
                               "unexpected HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
        }

        if (attempt < opts_.retry.max_attempts) {
            std::uint64_t bits;
            {
                std::lock_guard lock(rng_mu_);
                rng_state_ = detail::splitmix64(rng_state_);
                bits = rng_state_;
            }
            const auto ceiling = backoff_ceiling(opts_.retry, attempt);
            sleeper_(std::chrono::milliseconds(
                static_cast<std::int64_t>(detail::unit_interval(bits) * static_cast<double>(ceiling.count()))));
        }
    }
    throw BackendError(BackendError::Kind::Transient, opts_.retry.max_attempts,
                       "giving up after " + std::to_string(opts_.retry.max_attempts) + " attempts: " + last_error);
}

}  // namespace sarceval
