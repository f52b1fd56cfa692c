// Command-line front end: one subcommand per pipeline stage plus ad-hoc
// utilities. Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.

#include <filesystem>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "itts/assembler.hpp"
#include "itts/corpus.hpp"
#include "itts/csv.hpp"
#include "itts/drift.hpp"
#include "itts/error.hpp"
#include "itts/kernels.hpp"
#include "itts/mushra.hpp"
#include "itts/pipeline.hpp"
#include "itts/plot.hpp"
#include "itts/policy.hpp"
#include "itts/rng.hpp"
#include "itts/synthetic.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
    std::string corpus;
    std::string weights;
    std::uint64_t seed = 0;
    int k_max = 8;
    std::vector<int> k_targets = {0, 2};
    double crossfade_ms = 5.0;
    double threshold = 90.0;
    double alpha = 0.05;
    int threads = 0;
    std::string out_dir = "out";
    int hidden_dim = 32;
    int embed_dim = 32;
    bool forward_cache = false;
    std::string kernels = "auto";
};

itts::ExperimentConfig make_config(const CommonFlags& flags) {
    itts::ExperimentConfig config;
    config.corpus_path = flags.corpus;
    config.weights_path = flags.weights;
    config.encoder.hidden_dim = flags.hidden_dim;
    config.encoder.embed_dim = flags.embed_dim;
    config.k_max = flags.k_max;
    config.k_targets = flags.k_targets;
    config.crossfade_ms = flags.crossfade_ms;
    config.alpha = flags.alpha;
    config.master_seed = flags.seed;
    config.out_dir = flags.out_dir;
    config.threads = flags.threads;
    config.forward_cache = flags.forward_cache;
    return config;
}

void print_kv(const char* key, const std::string& value) {
    std::cerr << "  " << key << " = " << value << "\n";
}

void print_config(const std::string& sub, const CommonFlags& flags) {
    std::cerr << "[itts] " << sub << " resolved config:\n";
    if (!flags.corpus.empty()) print_kv("corpus", flags.corpus);
    if (!flags.weights.empty()) print_kv("weights", flags.weights);
    print_kv("seed", std::to_string(flags.seed));
    print_kv("k_max", std::to_string(flags.k_max));
    print_kv("crossfade_ms", itts::csv::format(flags.crossfade_ms));
    print_kv("threshold", itts::csv::format(flags.threshold));
    print_kv("alpha", itts::csv::format(flags.alpha));
    print_kv("threads", std::to_string(flags.threads));
    print_kv("out_dir", flags.out_dir);
    print_kv("hidden_dim", std::to_string(flags.hidden_dim));
    print_kv("embed_dim", std::to_string(flags.embed_dim));
    print_kv("forward_cache", flags.forward_cache ? "true" : "false");
    print_kv("kernel_backend", itts::kernels::active().name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ittslab: incremental TTS encoding, drift and assembly laboratory"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::function<void()> action;

    const auto add_common = [&flags](CLI::App* sub, bool with_encoder = true) {
        sub->add_option("--seed", flags.seed, "Master seed")->capture_default_str();
        sub->add_option("--threads", flags.threads,
                        "Worker threads (0 = hardware); never affects results")
            ->capture_default_str();
        sub->add_option("--kernels", flags.kernels, "Kernel backend: auto|scalar|avx2")
            ->capture_default_str();
        if (with_encoder) {
            sub->add_option("--hidden-dim", flags.hidden_dim, "LSTM units per direction")
                ->capture_default_str();
            sub->add_option("--embed-dim", flags.embed_dim, "Character embedding size")
                ->capture_default_str();
        }
    };

    // tokenize
    {
        auto* sub = app.add_subcommand("tokenize", "Split text into word/space/punct tokens");
        static std::string text;
        sub->add_option("--text", text, "Sentence to tokenize");
        sub->add_option("--corpus", flags.corpus, "Annotated corpus (JSONL) to tokenize instead");
        sub->callback([&, sub] {
            action = [&, sub] {
                print_config("tokenize", flags);
                std::vector<itts::Sentence> sentences;
                if (!text.empty()) {
                    sentences.push_back(itts::tokenize(text));
                } else if (!flags.corpus.empty()) {
                    for (const auto& as : itts::load_annotated_corpus(flags.corpus))
                        sentences.push_back(as.sentence);
                } else {
                    throw itts::ConfigError("tokenize needs --text or --corpus");
                }
                for (const auto& s : sentences) {
                    if (!s.id.empty()) std::cout << "# " << s.id << "\n";
                    for (const auto& tok : s.tokens)
                        std::cout << tok.index << '\t' << itts::to_string(tok.kind) << '\t'
                                  << tok.text << "\n";
                    std::cout << "N=" << s.length() << "\n";
                }
            };
        });
    }

    // encode
    {
        auto* sub = app.add_subcommand("encode", "Dump incremental token vectors for one k");
        static std::string text, out_file, weights_out;
        static int k = 0;
        sub->add_option("--text", text, "Sentence to encode");
        sub->add_option("--corpus", flags.corpus, "Corpus to encode");
        sub->add_option("--weights", flags.weights, "Weight file (otherwise seeded init)");
        sub->add_option("--k", k, "Lookahead")->capture_default_str();
        sub->add_option("--out", out_file, "Trace CSV path")->required();
        sub->add_option("--weights-out", weights_out, "Also save the weights used");
        sub->add_flag("--forward-cache", flags.forward_cache, "Reuse forward states across prefixes");
        add_common(sub);
        sub->callback([&, sub] {
            action = [&] {
                print_config("encode", flags);
                itts::EncoderConfig enc;
                enc.hidden_dim = flags.hidden_dim;
                enc.embed_dim = flags.embed_dim;
                enc.seed = itts::derive_seed(flags.seed, "weights");
                const itts::EncoderWeights weights =
                    flags.weights.empty() ? itts::init_weights(enc)
                                          : itts::load_weights(flags.weights, enc);
                if (!weights_out.empty()) itts::save_weights(weights, enc, weights_out);

                std::vector<itts::Sentence> sentences;
                if (!text.empty()) sentences.push_back(itts::tokenize(text, "cli"));
                if (!flags.corpus.empty())
                    for (const auto& as : itts::load_annotated_corpus(flags.corpus))
                        sentences.push_back(as.sentence);
                if (sentences.empty()) throw itts::ConfigError("encode needs --text or --corpus");

                std::ofstream out(out_file);
                if (!out) throw itts::DataError("cannot write " + out_file);
                out << "sentence_id,n,k,c";
                for (int j = 0; j < 2 * enc.hidden_dim; ++j) out << ",v" << j;
                out << "\n";
                itts::EncodeOptions options;
                options.forward_cache = flags.forward_cache;
                for (const auto& s : sentences) {
                    const itts::EncodingTrace trace =
                        itts::encode_incremental(s, k, weights, enc, options);
                    const auto dump = [&](int n, int kk, int c, const itts::TokenVector& tv) {
                        out << s.id << ',' << n << ',' << kk << ',' << c;
                        for (float v : tv.z) out << ',' << itts::csv::format(v);
                        out << "\n";
                    };
                    for (int n = 1; n <= s.length(); ++n) {
                        const auto& step = trace.steps[static_cast<std::size_t>(n - 1)];
                        dump(n, k, step.c, step.vectors[static_cast<std::size_t>(n - 1)]);
                    }
                    // full-context rows carry k = -1
                    for (int n = 1; n <= s.length(); ++n)
                        dump(n, -1, s.length(), trace.full[static_cast<std::size_t>(n - 1)]);
                }
            };
        });
    }

    // drift
    {
        auto* sub = app.add_subcommand("drift", "Drift records, summary and consecutive-k tests");
        sub->add_option("--corpus", flags.corpus, "Annotated corpus (JSONL)")->required();
        sub->add_option("--weights", flags.weights, "Weight file (otherwise seeded init)");
        sub->add_option("--k-max", flags.k_max, "Largest lookahead")->capture_default_str();
        sub->add_option("--out-dir", flags.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--alpha", flags.alpha, "Significance level")->capture_default_str();
        sub->add_flag("--forward-cache", flags.forward_cache, "Reuse forward states across prefixes");
        add_common(sub);
        sub->callback([&] {
            action = [&] {
                print_config("drift", flags);
                itts::run_drift_experiment(make_config(flags));
                std::cerr << "[itts] drift outputs in " << flags.out_dir << "/drift\n";
            };
        });
    }

    // rf
    {
        auto* sub = app.add_subcommand("rf", "Random-forest feature importance per k_target");
        static int trees = 100;
        static int repetitions = 10;
        static bool perm_on_train = false;
        sub->add_option("--corpus", flags.corpus, "Annotated corpus (JSONL)")->required();
        sub->add_option("--out-dir", flags.out_dir, "Directory holding drift/ outputs")
            ->capture_default_str();
        sub->add_option("--k-target", flags.k_targets, "Target lookahead(s)")
            ->capture_default_str();
        sub->add_option("--trees", trees, "Forest size")->capture_default_str();
        sub->add_option("--repetitions", repetitions, "Permutation repetitions")
            ->capture_default_str();
        sub->add_flag("--perm-on-train", perm_on_train,
                      "Permutation importance on training rows instead of held-out");
        add_common(sub, false);
        sub->callback([&] {
            action = [&] {
                print_config("rf", flags);
                itts::ExperimentConfig config = make_config(flags);
                config.rf.n_estimators = trees;
                config.rf.repetitions = repetitions;
                config.rf.permutation_on_training = perm_on_train;
                itts::run_rf_experiment(config);
                std::cerr << "[itts] rf outputs in " << flags.out_dir << "/rf\n";
            };
        });
    }

    // assemble
    {
        auto* sub = app.add_subcommand("assemble", "Incremental + offline waveforms for one sentence");
        static std::string sentence_id;
        static int k = 1;
        sub->add_option("--corpus", flags.corpus, "Annotated corpus (JSONL)")->required();
        sub->add_option("--sentence-id", sentence_id, "Sentence to assemble")->required();
        sub->add_option("--k", k, "Lookahead")->capture_default_str();
        sub->add_option("--crossfade-ms", flags.crossfade_ms, "Cross-fade length")
            ->capture_default_str();
        sub->add_option("--weights", flags.weights, "Weight file (otherwise seeded init)");
        sub->add_option("--out-dir", flags.out_dir, "Output directory")->capture_default_str();
        add_common(sub);
        sub->callback([&] {
            action = [&] {
                print_config("assemble", flags);
                itts::run_assembly(make_config(flags), sentence_id, k);
                std::cerr << "[itts] audio outputs in " << flags.out_dir << "/audio\n";
            };
        });
    }

    // mushra
    {
        auto* sub = app.add_subcommand("mushra", "Listening-test exclusion, summary and t-tests");
        static std::string ratings_path;
        sub->add_option("--ratings", ratings_path, "Ratings CSV")->required();
        sub->add_option("--threshold", flags.threshold, "Hidden-reference exclusion threshold")
            ->capture_default_str();
        sub->add_option("--alpha", flags.alpha, "Significance level")->capture_default_str();
        sub->add_option("--out-dir", flags.out_dir, "Output directory")->capture_default_str();
        sub->callback([&] {
            action = [&] {
                print_config("mushra", flags);
                const itts::RatingSet ratings = itts::load_ratings(ratings_path);
                for (const auto& w : ratings.warnings) std::cerr << "[itts] warning: " << w << "\n";
                const auto [retained, excluded] = itts::apply_exclusion(ratings, flags.threshold);
                const itts::MushraSummary summary = itts::summarize_mushra(retained);
                fs::create_directories(fs::path(flags.out_dir) / "mushra");
                const fs::path dir = fs::path(flags.out_dir) / "mushra";
                itts::write_mushra_summary_csv(summary, (dir / "summary.csv").string());
                itts::write_mushra_tests_csv(summary, flags.alpha, (dir / "tests.csv").string());
                itts::write_exclusions_csv(excluded, flags.threshold,
                                           (dir / "excluded.csv").string());
                std::cerr << "[itts] excluded " << excluded.size() << " participant(s); outputs in "
                          << dir.string() << "\n";
            };
        });
    }

    // gen-corpus
    {
        auto* sub = app.add_subcommand("gen-corpus", "Seeded synthetic annotated corpus");
        static std::size_t sentences = 200;
        static std::string out_file = "corpus.jsonl";
        static int min_words = 5, max_words = 42;
        sub->add_option("--sentences", sentences, "Sentence count")->capture_default_str();
        sub->add_option("--out", out_file, "Output JSONL path")->capture_default_str();
        sub->add_option("--min-words", min_words, "Minimum words")->capture_default_str();
        sub->add_option("--max-words", max_words, "Maximum words")->capture_default_str();
        add_common(sub, false);
        sub->callback([&] {
            action = [&] {
                print_config("gen-corpus", flags);
                itts::SyntheticCorpusParams params;
                params.num_sentences = sentences;
                params.seed = flags.seed;
                params.min_words = min_words;
                params.max_words = max_words;
                itts::save_annotated_corpus(itts::generate_corpus(params), out_file);
                std::cerr << "[itts] wrote " << sentences << " sentences to " << out_file << "\n";
            };
        });
    }

    // plot
    {
        auto* sub = app.add_subcommand("plot", "SVG charts from stage CSVs");
        static std::string drift_summary, mushra_summary, out_file;
        sub->add_option("--drift-summary", drift_summary, "drift summary.csv");
        sub->add_option("--mushra-summary", mushra_summary, "mushra summary.csv");
        sub->add_option("--out", out_file, "Output SVG path")->required();
        sub->callback([&] {
            action = [&] {
                print_config("plot", flags);
                if (!drift_summary.empty() == !mushra_summary.empty())
                    throw itts::ConfigError("plot needs exactly one of --drift-summary/--mushra-summary");
                if (!drift_summary.empty())
                    itts::plot_drift_summary(drift_summary, out_file);
                else
                    itts::plot_mushra_summary(mushra_summary, out_file);
                std::cerr << "[itts] wrote " << out_file << "\n";
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        itts::kernels::force_backend(flags.kernels);
        action();
    } catch (const itts::DataError& e) {
        std::cerr << "[itts] data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "[itts] internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
