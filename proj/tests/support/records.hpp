// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <steerbench/metrics/metrics.hpp>

#include <string>

namespace testkit
{

struct RecordSpec
{
    std::string model = "model-a";
    steerbench::tasks::TaskKind task = steerbench::tasks::TaskKind::NumberMultiply;
    steerbench::steering::MethodId method = steerbench::steering::MethodId::AllCode;
    int turn = 1;
    std::string instance = "inst-0";
    steerbench::sandbox::Modality modality = steerbench::sandbox::Modality::Code;
    bool success = true;
    double partial = -1.0;
    std::int64_t tokens = 100;
    std::int64_t latency_ms = 1000;
    std::int64_t exec_ms = 0;
    std::string complexity = "";
};

inline steerbench::metrics::RunRecord make_record(const RecordSpec& s)
{
    using namespace steerbench;
    metrics::RunRecord r;
    r.model_id = s.model;
    r.task = s.task;
    r.complexity = s.complexity;
    r.config_hash = "cfg";
    r.attempt.instance_id = s.instance;
    r.attempt.method = s.method;
    r.attempt.turn = s.turn;
    r.attempt.modality = s.modality;
    r.attempt.final_answer = s.success ? "right" : "wrong";
    double partial = s.partial >= 0.0 ? s.partial : (s.success ? 1.0 : 0.0);
    r.attempt.verdict = s.success ? tasks::Verdict::pass()
                                  : tasks::Verdict::fail(tasks::FailureReason::WrongValue, partial);
    r.attempt.verdict.partial_score = partial;
    r.attempt.cost = { s.tokens, s.latency_ms, s.exec_ms };
    return r;
}

} // namespace testkit
