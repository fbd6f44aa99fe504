// SPDX-License-Identifier: Apache-2.0
// Regenerates tests/fixtures/replay/store.jsonl by recording a scripted model and the real guest interpreter.
#include <steerbench/harness/harness.hpp>

#include "scripted.hpp"

#include <fmt/format.h>

#include <iostream>

using namespace steerbench;

namespace
{

// Keep in sync with the sweep test registered in tests/CMakeLists.txt.
constexpr const char* sweep_axis = "1_1..4_4";
constexpr int sweep_trials = 2;

struct Script
{
    std::vector<tasks::TaskInstance> instances;
    const steering::PromptAssets& assets;

    const tasks::TaskInstance& find(const llm::ChatRequest& r) const
    {
        const auto& first = r.messages.front().content;
        for (const auto& inst: instances)
            if (first.find(inst.prompt) != std::string::npos)
                return inst;
        throw std::runtime_error("scripted model got an unknown question");
    }

    static bool even(const tasks::TaskInstance& inst) { return inst.seed % 2 == 0; }

    static std::string code_for(const tasks::TaskInstance& inst, bool buggy = false)
    {
        if (buggy)
            return testkit::fence("print(solution)\n");
        std::string body;
        if (const auto* p = std::get_if<tasks::MultiplyPayload>(&inst.payload))
            body = fmt::format("print({} * {})\n", p->lhs.str(), p->rhs.str());
        else if (const auto* l = std::get_if<tasks::LettersPayload>(&inst.payload))
            body = fmt::format("word = \"{}\"\npos = [i + 1 for i, c in enumerate(word) if c == \"{}\"]\n"
                               "print(f\"{{len(pos)}}, at positions {{', '.join(map(str, pos))}}\")\n",
                               l->word, l->letter);
        else
            body = fmt::format("print(\"{}\")\n", tasks::reference_answer(inst));
        return testkit::fence(body);
    }

    static std::string text_for(const tasks::TaskInstance& inst, bool correct)
    {
        auto ref = tasks::reference_answer(inst);
        switch (inst.kind)
        {
        case tasks::TaskKind::NumberMultiply:
        {
            const auto& p = std::get<tasks::MultiplyPayload>(inst.payload);
            return fmt::format("Multiplying step by step, the product is {}.",
                               correct ? ref : expr::BigInt(p.lhs * p.rhs + 1).str());
        }
        case tasks::TaskKind::Game24: return correct ? "One solution is " + ref : "I could not find a combination.";
        default: return correct ? "The letter appears " + ref + "." : "The letter appears 0 times.";
        }
    }

    std::string reply(const llm::ChatRequest& r) const
    {
        const auto& inst = find(r);
        const auto& first = r.messages.front().content;
        const auto& last = r.messages.back();
        bool code_hint = first.rfind(assets.get("code_hint"), 0) == 0;
        bool cot = first.find(assets.get("cot_instruction")) != std::string::npos;
        bool autogen = !r.system_prompt.empty() || first.rfind(assets.get("autogen_system"), 0) == 0;
        bool text_hint = first.rfind(assets.get("text_hint"), 0) == 0;

        if (first.rfind(assets.get("summarizer"), 0) == 0)
            return "The code agent executed its program, so I trust it. Final answer: " +
                   tasks::reference_answer(inst);
        if (first.find("**Coding score (0-10)**") != std::string::npos)
        {
            if (inst.kind == tasks::TaskKind::Letters)
                return "**Coding score (0-10)**: 6\n**Text score (0-10)**: 7\nText it is. " + text_for(inst, true);
            return "**Coding score (0-10)**: 9\n**Text score (0-10)**: 4\nI will use code.\n" + code_for(inst);
        }
        if (last.role == llm::Role::Tool)
        {
            if (last.content.rfind("exitcode: 0", 0) != 0)
                return "The program failed; here is a fix.\n" + code_for(inst);
            auto at = last.content.find("Code output:\n");
            auto out = last.content.substr(at + 13);
            return "Final answer: " + out.substr(0, out.find('\n')) + "\nTERMINATE";
        }
        bool bare_multiply =
            !code_hint && !cot && !autogen && !text_hint && inst.kind == tasks::TaskKind::NumberMultiply;
        if (bare_multiply && r.messages.size() == 1)
        {
            // Sweep pattern: text on small products, shaky text in the middle, code on large ones.
            auto key = tasks::complexity_key(inst.complexity);
            int size = key[0] + key[1];
            if (size <= 3)
                return text_for(inst, true);
            if (size <= 5)
                return text_for(inst, even(inst));
        }
        bool code_class = code_hint || cot || autogen || bare_multiply;
        if (r.messages.size() > 1)
            return code_class ? "Checked again.\n" + code_for(inst) + "\nTERMINATE"
                              : text_for(inst, true) + " TERMINATE";
        if (code_class)
        {
            bool buggy = code_hint && !cot && inst.kind == tasks::TaskKind::Game24 && inst.seed == 100;
            return (cot ? "Let me reason first, then compute.\n" : "") + code_for(inst, buggy) +
                   (autogen || bare_multiply ? "\nTERMINATE" : "");
        }
        return text_for(inst, even(inst));
    }
};

} // namespace

int main(int argc, char** argv)
{
    if (argc != 2)
    {
        std::cerr << "usage: make_replay_fixture <fixture dir holding run.ini>\n";
        return 2;
    }
    std::filesystem::path dir = argv[1];
    auto config = harness::load_config(dir / "run.ini");
    std::filesystem::remove(config.store);
    auto scratch = std::filesystem::temp_directory_path() / "steerbench-fixture-record";
    std::filesystem::remove_all(scratch);
    config.output_dir = scratch;
    config.mode = llm::SessionMode::Record;

    auto assets = steering::PromptAssets::load(config.assets_dir);
    auto script = std::make_shared<Script>(Script { harness::plan_instances(config), assets });
    harness::RunHooks hooks;
    hooks.provider =
        std::make_shared<testkit::ScriptedModel>([script](const llm::ChatRequest& r) { return script->reply(r); });

    auto summary = harness::run(config, hooks);
    std::cout << harness::format_summary(summary);

    auto sweep = harness::sweep_config(config, tasks::TaskKind::NumberMultiply, sweep_axis, sweep_trials,
                                       steering::MethodId::CodeInterpreter);
    sweep.output_dir = scratch / "sweep";
    script->instances = harness::plan_instances(sweep);
    auto swept = harness::run(sweep, hooks);
    std::cout << harness::format_summary(swept);
    std::filesystem::remove_all(scratch);
    return summary.exit_code() == 2 || swept.exit_code() == 2 ? 2 : 0;
}
