// envnav: command-line front end for a file-based workspace.

#include <CLI11.hpp>
#include <iostream>

#include "envnav/lang/diagnostic.hpp"
#include "envnav/report.hpp"
#include "envnav/workspace.hpp"

namespace ws = envnav::workspace;
namespace report = envnav::report;
namespace tickets = envnav::tickets;

namespace {

enum Exit : int { kOk = 0, kValidation = 1, kIo = 2, kPartial = 3 };

struct Globals {
  std::string workspace = ".";
  std::string config;
  bool verbose = false;
};

ws::RunConfig run_config(const Globals& g, const ws::Workspace& w) {
  if (!g.config.empty()) return ws::config_from_json(ws::read_file(g.config));
  return ws::load_config(w);
}

envnav::Timestamp parse_time_option(const std::string& s) {
  auto t = envnav::Timestamp::parse_iso(s);
  if (!t) throw envnav::Error("bad timestamp '" + s + "', expected YYYY-MM-DDTHH:MM:SS");
  return *t;
}

int cmd_import(const Globals& g, ws::ImportMapping m, const std::string& kind, const std::string& decimal) {
  auto k = envnav::parse_kind(kind);
  if (!k) throw envnav::Error("--kind must be numeric or logic");
  m.kind = *k;
  if (decimal != "point" && decimal != "comma") throw envnav::Error("--decimal must be point or comma");
  m.decimal = decimal == "comma" ? ws::DecimalSeparator::Comma : ws::DecimalSeparator::Point;
  auto w = ws::Workspace::create(g.workspace);
  auto sum = ws::import_csv(w, m);
  std::cout << sum.sensor << ": " << sum.imported << " of " << sum.rows << " rows imported";
  if (sum.first) std::cout << ", " << sum.first->iso() << " .. " << sum.last->iso();
  std::cout << "\n";
  for (const auto& r : sum.rejected) std::cerr << m.source.string() << ":" << r.line << ": rejected: " << r.reason << "\n";
  for (const auto& wmsg : sum.warnings) std::cerr << "warning: " << wmsg << "\n";
  return kOk;
}

int cmd_check(const Globals& g) {
  ws::Workspace w(g.workspace);
  auto loaded = ws::load_spec(w);
  envnav::lang::print(std::cerr, loaded.diagnostics);
  if (!loaded.ok()) return kValidation;
  std::cout << "ok: " << loaded.spec.artifacts.size() << " artifacts, " << loaded.spec.sensors.size()
            << " declared sensors\n";
  return kOk;
}

int cmd_eval(const Globals& g) {
  ws::Workspace w(g.workspace);
  auto sum = ws::run_pipeline(w, run_config(g, w));
  for (const auto& d : sum.diagnostics) {
    if (g.verbose || d.severity == envnav::lang::Severity::Error) std::cerr << envnav::lang::to_string(d) << "\n";
  }
  if (sum.status == ws::RunStatus::ValidationFailed) return kValidation;
  std::cout << sum.artifact_count << " artifacts evaluated";
  if (sum.grid) std::cout << " over " << sum.grid->count << " timestamps";
  std::cout << "; tickets: " << sum.open_tickets << " open, " << sum.resolved_tickets << " resolved\n";
  for (const auto& [name, why] : sum.skipped) std::cerr << "skipped " << name << ": " << why << "\n";
  if (g.verbose) {
    for (const auto& f : sum.fulfillment) {
      std::cout << "  " << f.name << ": " << (f.ratio ? ws::format_number(*f.ratio) : "missing") << " ("
                << sum.violations[f.name] << " violations)\n";
    }
    for (const auto& r : sum.reports) std::cout << "  report " << r << "\n";
  }
  return sum.status == ws::RunStatus::Partial ? kPartial : kOk;
}

int cmd_tickets(const Globals& g, const std::string& status, bool as_json) {
  ws::Workspace w(g.workspace);
  if (status != "all" && status != "open" && status != "resolved") throw envnav::Error("--status must be open, resolved or all");
  std::vector<tickets::Ticket> list;
  if (std::filesystem::exists(w.tickets_path())) list = tickets::tickets_from_json(ws::read_file(w.tickets_path()));
  std::erase_if(list, [&](const tickets::Ticket& t) { return status != "all" && tickets::to_string(t.status) != status; });
  if (as_json) {
    std::cout << tickets::tickets_to_json(list);
    return kOk;
  }
  for (const auto& t : list) {
    std::cout << t.id << "  " << tickets::to_string(t.status) << "  " << t.interval.start.iso() << " .. "
              << t.interval.end.iso() << "  (" << t.interval.samples << " samples)\n";
  }
  return kOk;
}

struct CommentArgs {
  std::string section;
  std::string author;
  std::string text;
  std::string time;
};

int cmd_report(const Globals& g, const std::vector<std::string>& templates, const CommentArgs& c) {
  ws::Workspace w(g.workspace);
  auto now = c.time.empty() ? ws::now_local() : parse_time_option(c.time);
  if (!c.section.empty()) {
    if (c.text.empty()) throw envnav::Error("--comment requires --text");
    report::CommentStore store;
    if (std::filesystem::exists(w.comments_path())) store = report::CommentStore::from_json(ws::read_file(w.comments_path()));
    store = report::attach_comment(std::move(store), c.section, c.author.empty() ? "anonymous" : c.author, c.text, now);
    ws::write_file(w.comments_path(), store.to_json());
  }
  if (!std::filesystem::exists(w.results_dir() / "manifest.json")) {
    if (!c.section.empty()) {
      std::cout << "comment stored; no results yet, nothing rendered\n";
      return kOk;
    }
    throw envnav::IoError("no stored results; run eval first");
  }
  auto loaded = ws::load_spec(w);
  envnav::lang::print(std::cerr, loaded.diagnostics);
  if (!loaded.ok()) return kValidation;
  auto results = ws::load_results(w);
  for (const auto& id : ws::render_reports(w, results, loaded.spec, templates, now)) {
    std::cout << (w.reports_dir() / (id + ".html")).string() << "\n";
  }
  return kOk;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") std::cout << text;
  else ws::write_file(output, text);
}

int cmd_export(const Globals& g, const std::vector<std::string>& select, const std::string& format,
               const std::string& output) {
  if (format != "csv" && format != "json") throw envnav::Error("--format must be csv or json");
  auto results = ws::load_results(ws::Workspace(g.workspace));
  emit(ws::export_results(results, select, format == "csv" ? ws::ExportFormat::Tabular : ws::ExportFormat::Structured),
       output);
  return kOk;
}

int cmd_plot(const Globals& g, const std::string& kind, const std::vector<std::string>& series,
             const std::string& output) {
  auto k = report::parse_plot_kind(kind);
  if (!k) throw envnav::Error("--kind must be line, scatter or carpet");
  auto results = ws::load_results(ws::Workspace(g.workspace));
  std::vector<envnav::eval::VirtualSensor> inputs;
  for (const auto& name : series) {
    if (auto it = results.series.find(name); it != results.series.end()) {
      inputs.push_back({name, it->second});
    } else if (auto m = results.metrics.find(name); m != results.metrics.end()) {
      inputs.push_back({name, envnav::eval::expand_metric(m->second)});
    } else {
      throw envnav::Error("unknown series '" + name + "'");
    }
  }
  emit(report::plot_to_json(report::build_plot_data(*k, inputs)), output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate building-operation constraint specifications against sensor data"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--workspace,-w", g.workspace, "Workspace directory")->capture_default_str();
  app.add_option("--config,-c", g.config, "Run configuration file (overrides workspace.cfg)");
  app.add_flag("--verbose,-v", g.verbose, "Verbose output");

  ws::ImportMapping mapping;
  std::string kind = "numeric", decimal = "point", delimiter = ",";
  std::string source;
  auto* imp = app.add_subcommand("import", "Import a CSV file as one sensor series");
  imp->add_option("--file,-f", source, "Source CSV file")->required();
  imp->add_option("--sensor,-s", mapping.sensor, "Sensor id")->required();
  imp->add_option("--time-column", mapping.time_column)->capture_default_str();
  imp->add_option("--value-column", mapping.value_column)->capture_default_str();
  imp->add_option("--delimiter", delimiter)->capture_default_str();
  imp->add_option("--decimal", decimal, "point or comma")->capture_default_str();
  imp->add_option("--time-format", mapping.time_format, "strftime-style pattern")->capture_default_str();
  imp->add_option("--kind", kind, "numeric or logic")->capture_default_str();
  imp->add_option("--label", mapping.label);
  imp->add_option("--unit", mapping.unit);
  imp->add_flag("--overwrite", mapping.overwrite, "Replace an existing sensor");

  auto* check = app.add_subcommand("check", "Parse and validate the specification");
  auto* evalc = app.add_subcommand("eval", "Run preprocessing, evaluation, tickets and reports");

  std::string status = "all";
  bool as_json = false;
  auto* tick = app.add_subcommand("tickets", "List stored tickets");
  tick->add_option("--status", status, "open, resolved or all")->capture_default_str();
  tick->add_flag("--json", as_json, "Print the ticket store as JSON");

  std::vector<std::string> templates;
  CommentArgs comment;
  auto* rep = app.add_subcommand("report", "Render reports from stored results");
  rep->add_option("--template,-t", templates, "Template id (default: all)");
  rep->add_option("--comment", comment.section, "Attach a comment to this section id before rendering");
  rep->add_option("--author", comment.author);
  rep->add_option("--text", comment.text);
  rep->add_option("--time", comment.time, "Pin the comment/generation time (YYYY-MM-DDTHH:MM:SS)");

  std::vector<std::string> select;
  std::string format = "csv", output;
  auto* exp = app.add_subcommand("export", "Export stored results");
  exp->add_option("--select", select, "Result names")->delimiter(',');
  exp->add_option("--format", format, "csv or json")->capture_default_str();
  exp->add_option("--output,-o", output, "Output file (default: stdout)");

  std::string plot_kind = "line";
  std::vector<std::string> plot_series;
  std::string plot_output;
  auto* plot = app.add_subcommand("plot", "Write plot data for stored series");
  plot->add_option("--kind", plot_kind, "line, scatter or carpet")->capture_default_str();
  plot->add_option("--series", plot_series, "One series (two for scatter)")->delimiter(',')->required();
  plot->add_option("--output,-o", plot_output, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*imp) {
      if (delimiter.size() != 1) throw envnav::Error("--delimiter must be one character");
      mapping.delimiter = delimiter[0];
      mapping.source = source;
      return cmd_import(g, mapping, kind, decimal);
    }
    if (*check) return cmd_check(g);
    if (*evalc) return cmd_eval(g);
    if (*tick) return cmd_tickets(g, status, as_json);
    if (*rep) return cmd_report(g, templates, comment);
    if (*exp) return cmd_export(g, select, format, output);
    if (*plot) return cmd_plot(g, plot_kind, plot_series, plot_output);
  } catch (const envnav::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
