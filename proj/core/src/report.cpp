#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wvenrich/error.hpp"
#include "wvenrich/harness.hpp"

namespace wvenrich {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string percent(const std::optional<double>& v) {
  return v ? fmt("%.2f%%", *v) : std::string("n/a");
}

std::string p_value(const std::optional<WilcoxonResult>& w) {
  if (!w) return "no difference";
  return "p = " + fmt("%.3g", w->p_value) + " (W+ = " + fmt("%g", w->statistic) +
         ", n = " + std::to_string(w->n) + (w->exact ? ", exact)" : ", normal approx.)");
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table" || name == "table-text") return ReportFormat::Table;
  if (name == "records") return ReportFormat::Records;
  throw InvalidArgument("unknown report format \"" + std::string(name) +
                        "\" (expected table or records)");
}

std::string render_table(const EvalResult& r) {
  std::ostringstream out;
  out << "Dataset: " << r.dataset << " (" << r.documents << " instances, "
      << r.classes << " classes)\n";
  out << "Embedding: " << (r.embedding.empty() ? "-" : r.embedding) << '\n';
  out << "Cross-validation: " << r.repeats << "x" << r.folds
      << "-fold, seed " << r.seed << ", top-" << r.top_k << " predictions\n";
  if (r.grid) {
    out << "Grid search on repeat 0 / fold 0 test split (the chosen n, k are "
           "tuned on data that is also evaluated)\n";
  }
  out << '\n';

  const std::string rule(100, '-');
  out << pad("", 10) << lpad("n", 4) << lpad("k", 4) << " | "
      << pad("Micro Recall", 39) << "| " << "Macro Recall\n";
  out << pad("", 10) << lpad("", 8) << " | " << lpad("Baseline", 9)
      << lpad("WV Enrichment", 15) << lpad("Error Reduction", 16) << " | "
      << lpad("Baseline", 9) << lpad("WV Enrichment", 15)
      << lpad("Error Reduction", 16) << '\n';
  out << rule << '\n';
  std::string name(to_string(r.classifier));
  for (auto& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  out << pad(name, 10) << lpad(std::to_string(r.enrichment.n), 4)
      << lpad(std::to_string(r.enrichment.k), 4) << " | "
      << lpad(fmt("%.3f", r.baseline.micro), 9)
      << lpad(fmt("%.3f", r.enriched.micro), 15)
      << lpad(percent(r.micro_error_reduction), 16) << " | "
      << lpad(fmt("%.3f", r.baseline.macro), 9)
      << lpad(fmt("%.3f", r.enriched.macro), 15)
      << lpad(percent(r.macro_error_reduction), 16) << '\n';
  out << rule << '\n';
  out << "Wilcoxon signed-rank over " << r.cells.size()
      << " paired folds: micro " << p_value(r.micro_test) << "; macro "
      << p_value(r.macro_test) << '\n';

  std::size_t base_nz = 0;
  std::size_t rich_nz = 0;
  std::size_t tested = 0;
  for (const auto& c : r.cells) {
    base_nz += c.baseline_nonzero;
    rich_nz += c.enriched_nonzero;
    tested += c.test_size;
  }
  if (tested > 0) {
    out << "Mean non-zero entries per test vector: baseline "
        << fmt("%.2f", static_cast<double>(base_nz) / static_cast<double>(tested))
        << ", enriched "
        << fmt("%.2f", static_cast<double>(rich_nz) / static_cast<double>(tested))
        << '\n';
  }

  if (r.grid) {
    out << "\nGrid search (enriched micro recall; baseline "
        << fmt("%.3f", r.grid->baseline_micro) << ")\n";
    for (const auto& p : r.grid->points) {
      out << "  n=" << p.n << " k=" << p.k << "  micro "
          << fmt("%.3f", p.enriched_micro) << "  macro "
          << fmt("%.3f", p.enriched_macro)
          << (p.n == r.grid->n && p.k == r.grid->k ? "  <- chosen" : "")
          << '\n';
    }
  }
  return out.str();
}

std::string render_records(const EvalResult& r) {
  std::ostringstream out;
  for (const auto& c : r.cells) {
    nlohmann::json j = {
        {"repeat", c.repeat},
        {"fold", c.fold},
        {"classifier", std::string(to_string(r.classifier))},
        {"n", r.enrichment.n},
        {"k", r.enrichment.k},
        {"top_k", r.top_k},
        {"seed", r.seed},
        {"test_size", c.test_size},
        {"baseline_micro", c.baseline_micro},
        {"baseline_macro", c.baseline_macro},
        {"enriched_micro", c.enriched_micro},
        {"enriched_macro", c.enriched_macro},
        {"baseline_nonzero", c.baseline_nonzero},
        {"enriched_nonzero", c.enriched_nonzero},
    };
    out << j.dump() << '\n';
  }
  return out.str();
}

void write_report(const EvalResult& r, ReportFormat format, std::ostream& out) {
  out << (format == ReportFormat::Table ? render_table(r) : render_records(r));
}

void emit_report(const EvalResult& r, ReportFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report " + path.string());
  write_report(r, format, out);
  if (!out) throw Error("write failed for report " + path.string());
}

}  // namespace wvenrich
