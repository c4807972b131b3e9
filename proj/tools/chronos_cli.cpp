// chronos: command-line entry point.
//
//   chronos ingest --input raw.jsonl --store store.jsonl
//   chronos index  --store store.jsonl --out index.json
//   chronos ask    --store store.jsonl --question "..." [--explain] [--dump-graph g.json]
//   chronos eval   --store store.jsonl --method chronos --dataset qa.jsonl [--ablate X]... [--dump-graphs dir] --out run.json
//   chronos report --compare a.json b.json [--overall-both] [--json table.json]
//
// Every command accepts --config <file> and repeated --set key=value.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chronos/factory.hpp"

namespace {

struct Common {
    std::string config_file;
    std::vector<std::string> overrides;

    chronos::Config load() const {
        chronos::Config cfg;
        if (!config_file.empty()) cfg.load_file(config_file);
        cfg.apply_environment();
        cfg.apply_overrides(overrides);
        return cfg;
    }
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--config", common.config_file, "Config file (key = value)");
    cmd->add_option("--set", common.overrides, "Override a config key: key=value")->take_all();
}

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-aware retrieval and temporal reasoning over time-stamped facts"};
    app.require_subcommand(1);

    Common common;

    // ingest
    std::string ingest_input, ingest_store;
    auto* ingest = app.add_subcommand("ingest", "Validate quadruples and write the canonical store file");
    ingest->add_option("--input", ingest_input, "JSONL quadruples")->required();
    ingest->add_option("--store", ingest_store, "Output store path")->required();
    add_common(ingest, common);

    // index
    std::string index_store, index_out;
    auto* index = app.add_subcommand("index", "Embed the store and write the vectors as JSON");
    index->add_option("--store", index_store)->required();
    index->add_option("--out", index_out, "Output file; '-' for stdout")->default_val("-");
    add_common(index, common);

    // ask
    std::string ask_store, ask_question, ask_dump;
    bool ask_explain = false;
    auto* ask = app.add_subcommand("ask", "Answer one question with the full pipeline");
    ask->add_option("--store", ask_store)->required();
    ask->add_option("--question", ask_question)->required();
    ask->add_flag("--explain", ask_explain, "Print ranked candidates with score breakdowns");
    ask->add_option("--dump-graph", ask_dump, "Write the final event graph as JSON");
    add_common(ask, common);

    // eval
    std::string eval_store, eval_method = "chronos", eval_dataset, eval_dumps, eval_out, eval_name;
    std::vector<std::string> eval_ablate;
    auto* eval = app.add_subcommand("eval", "Run a method over a QA dataset");
    eval->add_option("--store", eval_store)->required();
    eval->add_option("--method", eval_method)->check(CLI::IsMember({"direct", "vanilla_rag", "chronos"}));
    eval->add_option("--dataset", eval_dataset)->required();
    eval->add_option("--ablate", eval_ablate, "Disable a pipeline component")
        ->check(CLI::IsMember({"time_aware_retrieval", "history_reconstruction", "event_augmentation",
                               "temporal_view", "entity_view"}));
    eval->add_option("--dump-graphs", eval_dumps, "Directory for per-item graph JSON");
    eval->add_option("--out", eval_out, "Report path (.json; a .csv is written alongside)");
    eval->add_option("--run-name", eval_name, "Row label in comparison tables");
    add_common(eval, common);

    // report
    std::vector<std::string> report_runs;
    std::string report_json;
    bool overall_both = false;
    auto* report = app.add_subcommand("report", "Compare saved runs");
    report->add_option("--compare", report_runs, "Report files")->required()->take_all();
    report->add_flag("--overall-both", overall_both, "Also print the item-weighted overall");
    report->add_option("--json", report_json, "Write the table as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            auto store = chronos::load_store(ingest_input);
            chronos::save_store(ingest_store, store);
            std::cerr << "wrote " << store.size() << " quadruples to " << ingest_store << "\n";
            return 0;
        }

        if (*report) {
            std::vector<chronos::Report> reports;
            for (const auto& path : report_runs) reports.push_back(chronos::load_report(path));
            auto table = chronos::aggregate(reports, overall_both);
            std::cout << table.to_text();
            if (!report_json.empty()) std::ofstream(report_json) << table.to_json().dump(2) << '\n';
            return 0;
        }

        const auto cfg = common.load();
        const auto embedder = chronos::make_embedder(cfg);

        if (*index) {
            const auto store = chronos::load_store(index_store);
            const auto idx = chronos::build_index(store, embedder);
            const auto text = idx.to_json().dump(1);
            if (index_out == "-") std::cout << text << '\n';
            else std::ofstream(index_out) << text << '\n';
            return 0;
        }

        const auto store = chronos::load_store(*ask ? ask_store : eval_store);
        const auto idx = chronos::build_index(store, embedder);
        const auto backend = chronos::make_backend(cfg);
        const auto prompts = chronos::make_prompts(cfg);
        auto run_cfg = chronos::run_config(cfg);
        const chronos::PipelineContext ctx{store, idx, *backend, prompts};

        if (*ask) {
            run_cfg.validate();
            const auto trace = chronos::run_pipeline(ask_question, ctx, run_cfg);
            if (ask_explain) {
                const auto& a = trace.analysis;
                std::cout << "entities:";
                for (const auto& e : a.entities) std::cout << " [" << e << "]";
                std::cout << "\nquery: " << a.time_agnostic_query << "\nwindow: " << a.window.to_string() << "\n";
                std::cout << "candidates (alpha=" << run_cfg.retrieval.alpha << ", tau_days=" << run_cfg.retrieval.tau_days
                          << "):\n";
                int rank = 1;
                for (const auto& c : trace.retrieved) {
                    std::cout << "  " << rank++ << ". " << c.quad << "  sim=" << fmt(c.sim) << " delta=" << fmt(c.delta_days, "%.0f")
                              << " time=" << fmt(c.time_score) << " score=" << fmt(c.score) << "\n";
                }
                if (trace.follow_up) std::cout << "follow-up: " << *trace.follow_up << "\n";
                std::cout << "\n" << trace.views.temporal_view;
                for (const auto& [_, v] : trace.views.entity_views) std::cout << "\n" << v;
                for (const auto& n : trace.notes) std::cout << "note: " << n << "\n";
                std::cout << "\n";
            }
            if (!ask_dump.empty()) std::ofstream(ask_dump) << chronos::serialize_graph(trace.graph) << '\n';
            std::cout << "ANSWER: " << trace.answer << "\n";
            return 0;
        }

        if (*eval) {
            std::vector<std::string> log;
            const auto items = chronos::load_dataset(eval_dataset, &log);
            for (const auto& l : log) std::cerr << l << "\n";
            run_cfg.method = *chronos::method_from_string(eval_method);
            for (const auto& a : eval_ablate) run_cfg.ablations.insert(*chronos::ablation_from_string(a));
            run_cfg.run_name = eval_name;
            if (!eval_dumps.empty()) run_cfg.dump_graphs_dir = eval_dumps;
            run_cfg.validate();

            chronos::Report rep;
            switch (run_cfg.method) {
                case chronos::Method::direct: rep = chronos::run_direct(items, *backend, prompts, run_cfg); break;
                case chronos::Method::vanilla_rag:
                    rep = chronos::run_vanilla_rag(items, idx, *backend, prompts, run_cfg.retrieval.top_n, run_cfg);
                    break;
                case chronos::Method::chronos: rep = chronos::run_chronos(items, ctx, run_cfg); break;
            }
            if (!eval_out.empty()) chronos::save_report(rep, eval_out);
            std::cout << chronos::aggregate({rep}).to_text();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
