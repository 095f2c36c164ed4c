#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sutured/cli.hpp"

using namespace sutured;
using namespace sutured::cli;

namespace {

std::string window_options(const WindowParams& w, Format f) {
  std::string s = "q=" + std::to_string(w.q) + " chi=" + std::to_string(w.chi_bar_plus) + " n=" + std::to_string(w.n) +
                  " +=" + std::to_string(w.tau_plus) + " -=" + std::to_string(w.tau_minus);
  for (const auto& [k, t] : w.tau) s += " " + std::to_string(k) + "=" + std::to_string(t);
  return s + (f == Format::Kv ? " kv" : " text");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact invariants of knots in 3-manifolds"};
  app.set_version_flag("--version", std::string("sutured ") + kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  std::string cache_dir;
  unsigned jobs = 1;
  bool no_cache = false;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "kv"}));
  app.add_option("--cache-dir", cache_dir, "Result cache directory (default $SUTURED_CACHE_DIR or ~/.cache/sutured)");
  app.add_option("--jobs", jobs, "Parallel jobs for batch")->check(CLI::PositiveNumber);
  app.add_flag("--no-cache", no_cache, "Do not read or write the cache");

  std::string input;
  struct FileCmd {
    const char* name;
    const char* help;
  };
  const FileCmd file_cmds[] = {
      {"torsion", "Sutured torsion of a presentation (.gp)"},
      {"hfk11", "Knot Floer homology of a (1,1) diagram (.od)"},
      {"decomp", "Norms and torsion splitting of a group-ring element (.gre)"},
      {"detect", "Detection classifier on coset data (.det) or a diagram (.od)"},
      {"crosscheck", "Compare diagram and Fox-calculus Euler characteristics (.od)"},
  };
  for (const auto& c : file_cmds) app.add_subcommand(c.name, c.help)->add_option("file", input)->required();

  WindowParams w;
  std::optional<int> tau_plus, tau_minus;
  std::vector<std::string> taus;
  auto* win = app.add_subcommand("window", "Grading window constants and identities");
  win->add_option("--q", w.q)->required();
  win->add_option("--chi", w.chi_bar_plus)->required();
  win->add_option("--n", w.n)->required();
  win->add_option("--tau-plus", tau_plus)->check(CLI::IsMember({0, -1}));
  win->add_option("--tau-minus", tau_minus)->check(CLI::IsMember({0, -1}));
  win->add_option("--tau", taus, "tau(k) as k=v; repeatable");

  std::string out_dir;
  auto* batch = app.add_subcommand("batch", "Run every input file in a directory");
  batch->add_option("dir", input)->required();
  batch->add_option("--out", out_dir, "Directory for per-job records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return InputError;
  }

  Format f = format == "kv" ? Format::Kv : Format::Text;
  std::optional<Cache> cache;
  if (!no_cache) cache.emplace(cache_dir.empty() ? Cache::default_dir() : std::filesystem::path(cache_dir));
  const Cache* cp = cache ? &*cache : nullptr;

  try {
    for (const auto& c : file_cmds)
      if (app.got_subcommand(c.name)) {
        auto r = run_file(c.name, input, f, cp);
        std::cout << r.output;
        return r.exit_code;
      }

    if (app.got_subcommand(win)) {
      for (const auto& t : taus) {
        auto eq = t.find('=');
        if (eq == std::string::npos) throw InvalidInput("--tau expects k=v, got '" + t + "'");
        w.tau[std::stoll(t.substr(0, eq))] = std::stoi(t.substr(eq + 1));
      }
      // Unspecified tau values default to the one making chi(S_j) even.
      auto fill = [](Int chi) { return chi % 2 ? -1 : 0; };
      w.tau_plus = tau_plus.value_or(0);
      w.tau_minus = tau_minus.value_or(fill(w.chi_bar_plus - w.q));
      for (Int k = w.n; k <= w.n + 2; ++k)
        if (!w.tau.count(k)) w.tau[k] = fill(w.chi_bar_plus - k * w.q);
      std::string key;
      if (cp) {
        key = Cache::key("window", window_options(w, f), "");
        if (auto hit = cp->get(key)) {
          std::cout << hit->output;
          return hit->exit_code;
        }
      }
      auto r = run_window(w, f);
      if (cp) cp->put(key, r);
      std::cout << r.output;
      return r.exit_code;
    }

    if (app.got_subcommand(batch)) {
      BatchOptions opts;
      opts.format = f;
      opts.jobs = jobs;
      opts.cache = cp;
      if (!out_dir.empty()) opts.out_dir = out_dir;
      auto r = run_batch(input, opts);
      std::cout << r.summary;
      return r.exit_code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return InputError;
  }
  return InputError;
}
