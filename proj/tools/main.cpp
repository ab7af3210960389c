#include <fcntl.h>
#include <unistd.h>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drec/checkpoint.hpp"
#include "drec/errors.hpp"
#include "drec/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

// One run at a time per output directory.
class DirLock {
 public:
  explicit DirLock(const std::string& dir) : path_(dir + "/.lock") {
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0)
      throw drec::ConfigError("output directory is locked: " + path_);
    ::close(fd);
  }
  ~DirLock() { std::remove(path_.c_str()); }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  std::string path_;
};

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
  return buf;
}

struct CliOptions {
  std::string config_file;
  std::string interactions, social, out, checkpoint, split_dir;
  double ratio = 0.8;
  double noise_ratio = 0.0;
  std::string protocol = "all-ranking";
  std::string k_list;
  int n = 100;
  bool json_output = false;
  std::string ablation = "full";
  std::string perturb = "cp";
  std::string cl_loss = "ac";
  std::string histogram_csv;
  drec::TrainConfig cfg;
};

void add_hyper_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--seed", opt.cfg.seed, "RNG seed");
  cmd->add_option("--beta-s", opt.cfg.thresholds.social,
                  "social denoise threshold");
  cmd->add_option("--beta-r", opt.cfg.thresholds.interaction,
                  "interaction denoise threshold");
  cmd->add_option("--sigma", opt.cfg.thresholds.gaussian_sigma,
                  "gaussian kernel width");
  cmd->add_option("--lambda1", opt.cfg.weights.cl_interaction,
                  "interaction-view CL weight");
  cmd->add_option("--lambda2", opt.cfg.weights.cl_social,
                  "social-view CL weight");
  cmd->add_option("--lambda3", opt.cfg.weights.cl_item, "item CL weight");
  cmd->add_option("--lambda-reg", opt.cfg.weights.reg,
                  "embedding regularization weight");
  cmd->add_option("--tau", opt.cfg.weights.temperature, "CL temperature");
  cmd->add_option("--epsilon", opt.cfg.epsilon, "perturbation magnitude");
  cmd->add_option("--layers", opt.cfg.layers, "propagation depth");
  cmd->add_option("--dim", opt.cfg.dim, "embedding width");
  cmd->add_option("--batch", opt.cfg.batch_size, "mini-batch size");
  cmd->add_option("--lr", opt.cfg.learning_rate, "learning rate");
  cmd->add_option("--epochs", opt.cfg.max_epochs, "maximum epochs");
  cmd->add_option("--patience", opt.cfg.patience,
                  "early-stopping patience (0 disables validation)");
  cmd->add_option("--ablation", opt.ablation, "full|rd|sd|ed");
  cmd->add_option("--perturb", opt.perturb, "cp|rp");
  cmd->add_option("--cl-loss", opt.cl_loss, "ac|infonce");
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(c));
  return s;
}

void resolve_enums(CliOptions& opt) {
  opt.ablation = lower(opt.ablation);
  opt.cfg.ablation = drec::parse_ablation(opt.ablation);
  std::string p = lower(opt.perturb);
  if (p == "cp")
    opt.cfg.perturb_mode = drec::PerturbMode::kCollaborative;
  else if (p == "rp")
    opt.cfg.perturb_mode = drec::PerturbMode::kRandom;
  else
    throw drec::ConfigError("unknown perturbation mode '" + opt.perturb + "'");
  std::string c = lower(opt.cl_loss);
  if (c == "ac")
    opt.cfg.cl_loss = drec::ClLoss::kAnchored;
  else if (c == "infonce")
    opt.cfg.cl_loss = drec::ClLoss::kInfonce;
  else
    throw drec::ConfigError("unknown CL loss '" + opt.cl_loss + "'");
}

// Flat "key = value" config file; command-line flags take precedence.
// Keys mirror the long flag names (dashes and underscores both accepted).
void apply_config_file(CLI::App* cmd, const std::string& path,
                       CliOptions& opt) {
  std::ifstream in(path);
  if (!in) throw drec::DataError("cannot open config file " + path);

  auto assign = [&](const std::string& key, const std::string& value) {
    std::string flag = "--" + key;
    for (char& c : flag)
      if (c == '_') c = '-';
    const CLI::Option* option = cmd->get_option_no_throw(flag);
    if (option == nullptr)
      throw drec::ConfigError("unknown config key '" + key + "'");
    if (option->count() > 0) return;  // flag wins

    if (key == "interactions") opt.interactions = value;
    else if (key == "social") opt.social = value;
    else if (key == "split") opt.split_dir = value;
    else if (key == "out") opt.out = value;
    else if (key == "checkpoint") opt.checkpoint = value;
    else if (key == "ratio") opt.ratio = std::stod(value);
    else if (key == "noise_ratio") opt.noise_ratio = std::stod(value);
    else if (key == "seed") opt.cfg.seed = std::stoull(value);
    else if (key == "beta_s") opt.cfg.thresholds.social = std::stod(value);
    else if (key == "beta_r") opt.cfg.thresholds.interaction = std::stod(value);
    else if (key == "sigma") opt.cfg.thresholds.gaussian_sigma = std::stod(value);
    else if (key == "lambda1") opt.cfg.weights.cl_interaction = std::stod(value);
    else if (key == "lambda2") opt.cfg.weights.cl_social = std::stod(value);
    else if (key == "lambda3") opt.cfg.weights.cl_item = std::stod(value);
    else if (key == "lambda_reg") opt.cfg.weights.reg = std::stod(value);
    else if (key == "tau") opt.cfg.weights.temperature = std::stod(value);
    else if (key == "epsilon") opt.cfg.epsilon = std::stod(value);
    else if (key == "layers") opt.cfg.layers = std::stoi(value);
    else if (key == "dim") opt.cfg.dim = std::stoi(value);
    else if (key == "batch") opt.cfg.batch_size = std::stoi(value);
    else if (key == "lr") opt.cfg.learning_rate = std::stod(value);
    else if (key == "epochs") opt.cfg.max_epochs = std::stoi(value);
    else if (key == "patience") opt.cfg.patience = std::stoi(value);
    else if (key == "ablation") opt.ablation = value;
    else if (key == "perturb") opt.perturb = value;
    else if (key == "cl_loss") opt.cl_loss = value;
    else if (key == "protocol") opt.protocol = value;
    else if (key == "k") opt.k_list = value;
    else if (key == "n") opt.n = std::stoi(value);
    else
      throw drec::ConfigError("unhandled config key '" + key + "'");
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw drec::ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected key = value");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    for (char& c : key) {
      c = static_cast<char>(std::tolower(c));
      if (c == '-') c = '_';
    }
    try {
      assign(key, value);
    } catch (const std::invalid_argument&) {
      throw drec::ConfigError(path + ":" + std::to_string(line_no) +
                              ": bad value for '" + key + "'");
    }
  }
}

std::vector<int> parse_k_list(const std::string& s,
                              std::vector<int> fallback) {
  if (s.empty()) return fallback;
  std::vector<int> ks;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    ks.push_back(std::stoi(tok));
  }
  if (ks.empty()) throw drec::ConfigError("empty --k list");
  return ks;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    vals.push_back(std::stod(tok));
  }
  return vals;
}

// Canonical sorted key=value dump; its hash identifies the run config.
std::map<std::string, std::string> resolved_config(const CliOptions& opt) {
  std::map<std::string, std::string> kv;
  auto put = [&kv](const std::string& k, auto v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    kv[k] = os.str();
  };
  put("interactions", opt.interactions);
  put("social", opt.social);
  put("out", opt.out);
  put("ratio", opt.ratio);
  put("noise_ratio", opt.noise_ratio);
  put("seed", opt.cfg.seed);
  put("beta_s", opt.cfg.thresholds.social);
  put("beta_r", opt.cfg.thresholds.interaction);
  put("sigma", opt.cfg.thresholds.gaussian_sigma);
  put("lambda1", opt.cfg.weights.cl_interaction);
  put("lambda2", opt.cfg.weights.cl_social);
  put("lambda3", opt.cfg.weights.cl_item);
  put("lambda_reg", opt.cfg.weights.reg);
  put("tau", opt.cfg.weights.temperature);
  put("epsilon", opt.cfg.epsilon);
  put("layers", opt.cfg.layers);
  put("dim", opt.cfg.dim);
  put("batch", opt.cfg.batch_size);
  put("lr", opt.cfg.learning_rate);
  put("epochs", opt.cfg.max_epochs);
  put("patience", opt.cfg.patience);
  put("ablation", drec::ablation_name(opt.cfg.ablation));
  put("perturb",
      opt.cfg.perturb_mode == drec::PerturbMode::kCollaborative ? "cp" : "rp");
  put("cl_loss",
      opt.cfg.cl_loss == drec::ClLoss::kAnchored ? "ac" : "infonce");
  return kv;
}

std::string config_hash(const std::map<std::string, std::string>& kv) {
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
  return hex64(fnv1a64(os.str()));
}

void write_manifest(const CliOptions& opt, const std::string& path) {
  auto kv = resolved_config(opt);
  json j;
  for (const auto& [k, v] : kv) j["config"][k] = v;
  j["config_hash"] = config_hash(kv);
  j["output_dir"] = opt.out;
  j["datasets"] = {{"interactions", opt.interactions}, {"social", opt.social}};
  std::ofstream out(path);
  if (!out) throw drec::DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

drec::DatasetSplit obtain_split(const CliOptions& opt) {
  if (!opt.split_dir.empty()) return drec::load_split(opt.split_dir);
  if (opt.interactions.empty() || opt.social.empty())
    throw drec::ConfigError(
        "either --split or --interactions/--social is required");
  auto raw = drec::load_edge_lists(opt.interactions, opt.social);
  return drec::split_train_test(raw, opt.ratio, opt.cfg.seed);
}

int cmd_train(CliOptions& opt) {
  resolve_enums(opt);
  opt.cfg.validate();
  fs::create_directories(opt.out);
  DirLock lock(opt.out);
  write_manifest(opt, opt.out + "/manifest.json");

  drec::DatasetSplit split = obtain_split(opt);
  if (opt.noise_ratio > 0.0)
    split = drec::inject_interaction_noise(split, opt.noise_ratio,
                                           opt.cfg.seed);
  drec::save_split(split, opt.out + "/split");

  drec::Trainer trainer(opt.cfg, split);
  drec::TrainResult result = trainer.train();

  {
    std::ofstream log(opt.out + "/train.log");
    if (!log) throw drec::DataError("cannot write training log");
    log << drec::log_to_tsv(result.log);
  }
  drec::write_checkpoint(opt.out + "/checkpoint.bin", result.best_state);
  {
    std::ofstream meta(opt.out + "/checkpoint.meta");
    meta << "config_hash=" << config_hash(resolved_config(opt)) << '\n'
         << "epoch=" << result.best_epoch << '\n'
         << "val_recall20=" << result.best_val_recall20 << '\n'
         << "user_count=" << split.user_count << '\n'
         << "item_count=" << split.item_count << '\n'
         << "dim=" << opt.cfg.dim << '\n';
  }
  std::cout << "trained " << result.log.size() << " epochs; best epoch "
            << result.best_epoch << " val_recall20 "
            << result.best_val_recall20 << '\n';
  return kExitOk;
}

int cmd_eval(CliOptions& opt) {
  if (opt.checkpoint.empty())
    throw drec::ConfigError("--checkpoint is required");
  drec::EmbeddingState state = drec::read_checkpoint(opt.checkpoint);
  drec::DatasetSplit split = obtain_split(opt);

  std::string protocol = lower(opt.protocol);
  std::vector<int> ks =
      protocol == "real-plus-n" || protocol == "real_plus_n"
          ? parse_k_list(opt.k_list, {3})
          : parse_k_list(opt.k_list, {10, 20});
  drec::MetricsReport report = drec::evaluate_state(
      state, split, opt.cfg.layers, ks, protocol, opt.n, opt.cfg.seed);
  if (opt.json_output)
    std::cout << report.to_json_lines();
  else
    std::cout << report.to_key_value_block() << report.to_tsv();
  return kExitOk;
}

int cmd_denoise_report(CliOptions& opt) {
  resolve_enums(opt);
  drec::DatasetSplit split = obtain_split(opt);
  auto graph = drec::build_interaction_graph(split.train, split.user_count,
                                             split.item_count);
  auto social = drec::build_social_network(split.social, split.user_count);

  drec::EmbeddingState state;
  if (!opt.checkpoint.empty()) {
    state = drec::read_checkpoint(opt.checkpoint);
  } else {
    auto [s, o] = drec::initialize(opt.cfg, split.user_count,
                                   split.item_count);
    state = std::move(s);
  }

  auto [pref_users, pref_items] = drec::propagate_bipartite(
      state.user_emb, state.item_emb, graph, opt.cfg.layers);
  auto social_res =
      drec::denoise_social(social, pref_users, opt.cfg.thresholds);
  drec::Mat enhanced =
      drec::social_enhance(pref_users, social_res.network);
  auto inter_res =
      drec::denoise_interaction(graph, enhanced, pref_items,
                                opt.cfg.thresholds, split.train_flags);

  drec::DenoiseReport report = social_res.report;
  report.merge(inter_res.report);
  std::cout << report.to_key_value_block();

  if (!opt.histogram_csv.empty()) {
    std::ofstream csv(opt.histogram_csv);
    if (!csv) throw drec::DataError("cannot write " + opt.histogram_csv);
    csv << "bin_low,bin_high,pc_count,ic_count\n";
    for (std::size_t b = 0; b < drec::kScoreHistogramBins; ++b) {
      double w = 1.0 / drec::kScoreHistogramBins;
      csv << b * w << ',' << (b + 1) * w << ',' << report.pc_histogram[b]
          << ',' << report.ic_histogram[b] << '\n';
    }
  }
  return kExitOk;
}

int cmd_inject_noise(CliOptions& opt) {
  if (opt.out.empty()) throw drec::ConfigError("--out is required");
  drec::DatasetSplit split = obtain_split(opt);
  split = drec::inject_interaction_noise(split, opt.noise_ratio, opt.cfg.seed);
  fs::create_directories(opt.out);
  drec::save_split(split, opt.out);
  std::cout << "train_edges=" << split.train.size()
            << " fabricated=" << split.fabricated_count() << '\n';
  return kExitOk;
}

struct SweepLists {
  std::string beta_s, beta_r, lambda1, lambda2, lambda3, tau, epsilon;
};

int cmd_sweep(CliOptions& opt, const SweepLists& lists) {
  resolve_enums(opt);
  if (opt.out.empty()) throw drec::ConfigError("--out is required");

  struct Axis {
    std::string name;
    std::vector<double> values;
  };
  std::vector<Axis> axes;
  auto add_axis = [&axes](const std::string& name, const std::string& text) {
    auto vals = parse_double_list(text);
    if (!vals.empty()) axes.push_back({name, vals});
  };
  add_axis("beta_s", lists.beta_s);
  add_axis("beta_r", lists.beta_r);
  add_axis("lambda1", lists.lambda1);
  add_axis("lambda2", lists.lambda2);
  add_axis("lambda3", lists.lambda3);
  add_axis("tau", lists.tau);
  add_axis("epsilon", lists.epsilon);
  if (axes.empty()) throw drec::ConfigError("sweep grid is empty");

  std::size_t cells = 1;
  for (const auto& a : axes) cells *= a.values.size();

  fs::create_directories(opt.out);
  DirLock lock(opt.out);
  drec::DatasetSplit split = obtain_split(opt);
  if (opt.noise_ratio > 0.0)
    split = drec::inject_interaction_noise(split, opt.noise_ratio,
                                           opt.cfg.seed);

  std::ofstream table(opt.out + "/sweep.tsv");
  table << "#cell";
  for (const auto& a : axes) table << '\t' << a.name;
  table << "\trecall@20\tndcg@20\n";

  std::vector<std::size_t> index(axes.size(), 0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    CliOptions cell_opt = opt;
    std::size_t rem = cell;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      index[a] = rem % axes[a].values.size();
      rem /= axes[a].values.size();
      double v = axes[a].values[index[a]];
      if (axes[a].name == "beta_s") cell_opt.cfg.thresholds.social = v;
      if (axes[a].name == "beta_r") cell_opt.cfg.thresholds.interaction = v;
      if (axes[a].name == "lambda1") cell_opt.cfg.weights.cl_interaction = v;
      if (axes[a].name == "lambda2") cell_opt.cfg.weights.cl_social = v;
      if (axes[a].name == "lambda3") cell_opt.cfg.weights.cl_item = v;
      if (axes[a].name == "tau") cell_opt.cfg.weights.temperature = v;
      if (axes[a].name == "epsilon") cell_opt.cfg.epsilon = v;
    }
    cell_opt.cfg.validate();
    cell_opt.out = opt.out + "/cell_" + std::to_string(cell);
    fs::create_directories(cell_opt.out);
    write_manifest(cell_opt, cell_opt.out + "/manifest.json");

    drec::Trainer trainer(cell_opt.cfg, split);
    auto result = trainer.train();
    drec::write_checkpoint(cell_opt.out + "/checkpoint.bin",
                           result.best_state);
    {
      std::ofstream log(cell_opt.out + "/train.log");
      log << drec::log_to_tsv(result.log);
    }
    std::vector<int> ks{20};
    auto report = drec::evaluate_state(result.best_state, split,
                                       cell_opt.cfg.layers, ks);
    table << cell;
    for (std::size_t a = 0; a < axes.size(); ++a)
      table << '\t' << axes[a].values[index[a]];
    table << '\t' << report.recall_at(20) << '\t' << report.ndcg_at(20)
          << '\n';
  }
  std::cout << "sweep complete: " << cells << " cells\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"training and evaluation engine for dual-graph denoising "
               "social recommendation"};
  app.require_subcommand(1);

  CliOptions opt;
  SweepLists sweep_lists;

  auto add_data_flags = [&opt](CLI::App* cmd, bool require) {
    cmd->add_option("--config", opt.config_file,
                    "flat key=value config file; flags override");
    auto* i = cmd->add_option("--interactions", opt.interactions,
                              "interaction edge-list file");
    auto* s =
        cmd->add_option("--social", opt.social, "social edge-list file");
    cmd->add_option("--split", opt.split_dir, "persisted split directory");
    cmd->add_option("--ratio", opt.ratio, "train fraction of the split");
    if (require) {
      i->required();
      s->required();
    }
  };

  CLI::App* train = app.add_subcommand("train", "train a model");
  add_data_flags(train, true);
  train->add_option("--out", opt.out, "output directory")->required();
  train->add_option("--noise-ratio", opt.noise_ratio,
                    "fabricated-interaction ratio injected before training");
  add_hyper_flags(train, opt);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  add_data_flags(eval, false);
  eval->add_option("--checkpoint", opt.checkpoint, "embedding checkpoint")
      ->required();
  eval->add_option("--protocol", opt.protocol, "all-ranking|real-plus-n");
  eval->add_option("--k", opt.k_list, "comma-separated cutoff list");
  eval->add_option("--n", opt.n, "sampled negatives for real-plus-n");
  eval->add_flag("--json", opt.json_output, "emit JSON records");
  eval->add_option("--layers", opt.cfg.layers, "propagation depth");
  eval->add_option("--seed", opt.cfg.seed, "RNG seed");

  CLI::App* den = app.add_subcommand("denoise-report",
                                     "one structure-denoising pass statistics");
  add_data_flags(den, false);
  den->add_option("--checkpoint", opt.checkpoint,
                  "embedding checkpoint (Xavier init when absent)");
  den->add_option("--histogram-csv", opt.histogram_csv,
                  "write PC/IC histograms to this CSV");
  add_hyper_flags(den, opt);

  CLI::App* inject = app.add_subcommand("inject-noise",
                                        "corrupt a split with fabricated edges");
  add_data_flags(inject, false);
  inject->add_option("--out", opt.out, "output split directory")->required();
  inject->add_option("--noise-ratio", opt.noise_ratio, "fabrication ratio")
      ->required();
  inject->add_option("--seed", opt.cfg.seed, "RNG seed");

  CLI::App* sweep = app.add_subcommand("sweep", "hyperparameter grid sweep");
  add_data_flags(sweep, false);
  sweep->add_option("--out", opt.out, "output directory")->required();
  sweep->add_option("--noise-ratio", opt.noise_ratio, "noise ratio");
  sweep->add_option("--beta-s", sweep_lists.beta_s, "comma list");
  sweep->add_option("--beta-r", sweep_lists.beta_r, "comma list");
  sweep->add_option("--lambda1", sweep_lists.lambda1, "comma list");
  sweep->add_option("--lambda2", sweep_lists.lambda2, "comma list");
  sweep->add_option("--lambda3", sweep_lists.lambda3, "comma list");
  sweep->add_option("--tau", sweep_lists.tau, "comma list");
  sweep->add_option("--epsilon", sweep_lists.epsilon, "comma list");
  sweep->add_option("--seed", opt.cfg.seed, "RNG seed");
  sweep->add_option("--epochs", opt.cfg.max_epochs, "maximum epochs");
  sweep->add_option("--patience", opt.cfg.patience, "early-stopping patience");
  sweep->add_option("--dim", opt.cfg.dim, "embedding width");
  sweep->add_option("--layers", opt.cfg.layers, "propagation depth");
  sweep->add_option("--batch", opt.cfg.batch_size, "mini-batch size");
  sweep->add_option("--lr", opt.cfg.learning_rate, "learning rate");
  sweep->add_option("--ablation", opt.ablation, "full|rd|sd|ed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (!opt.config_file.empty()) {
      for (CLI::App* cmd : {train, eval, den, inject, sweep})
        if (cmd->parsed()) apply_config_file(cmd, opt.config_file, opt);
    }
    if (train->parsed()) return cmd_train(opt);
    if (eval->parsed()) return cmd_eval(opt);
    if (den->parsed()) return cmd_denoise_report(opt);
    if (inject->parsed()) return cmd_inject_noise(opt);
    if (sweep->parsed()) return cmd_sweep(opt, sweep_lists);
  } catch (const drec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const drec::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const drec::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}
