#include "pulseqsdc/run_config.hpp"

#include <set>
#include <stdexcept>

#include "json.hpp"
#include "pulseqsdc/text_io.hpp"

namespace pulseqsdc::cli {

namespace {

using nlohmann::json;

// Reads the keys of one JSON object and refuses any it was not asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "must be an object");
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail(key, "is missing");
    return j_.at(key);
  }

  Section section(const std::string& key) { return Section(at(key), name(key)); }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail(key, "must be a number");
    return v.get<double>();
  }

  double positive(const std::string& key) {
    const double v = number(key);
    if (!(v > 0.0)) fail(key, "must be > 0");
    return v;
  }

  std::uint64_t count(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_unsigned()) fail(key, "must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key) {
    const json& v = at(key);
    if (!v.is_boolean()) fail(key, "must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) fail(key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(key, "must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) fail(k, "is not a known key");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw std::invalid_argument("config: '" + name(key) + "' " + what);
  }

 private:
  std::string name(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

pulsekit::TimeGrid RunConfig::grid(double duration_in_T) const {
  return cavity::grid_with_resolution(cavity, duration_in_T, samples_per_T.value_or(cavity::default_samples_per_T(cavity)));
}

void RunConfig::set_seed(std::uint64_t s) {
  seed = s;
  protocol.seed = s;
}

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  Section top(root, "");

  {
    Section s = top.section("cavity");
    const double kappa_T = s.positive("kappa_T");
    const double ratio = s.positive("g0_kappa_ratio");
    const auto n = s.count("n");
    if (n < 2 || n > 1000) s.fail("n", "must be an integer in [2, 1000]");
    c.cavity = cavity::CavityParams::from_ratios(kappa_T, ratio, static_cast<int>(n));
    s.finish();
  }
  {
    Section s = top.section("grid");
    const json& v = s.at("samples_per_T");
    if (v.is_string() && v.get<std::string>() == "auto") {
      c.samples_per_T.reset();
    } else if (v.is_number_unsigned() && v.get<std::uint64_t>() >= 2) {
      c.samples_per_T = v.get<std::size_t>();
    } else {
      s.fail("samples_per_T", "must be \"auto\" or an integer >= 2");
    }
    s.finish();
  }
  {
    Section s = top.section("alphabet");
    c.bin_sigma_T = s.positive("bin_sigma_T");
    s.finish();
  }
  {
    Section s = top.section("targets");
    Section a = s.section("f_a");
    c.fa_center_T = a.number("center_T");
    c.fa_sigma_T = a.positive("sigma_T");
    a.finish();
    Section b = s.section("f_b");
    c.fb_centers_T = b.numbers("centers_T");
    c.fb_sigmas_T = b.numbers("sigmas_T");
    if (c.fb_centers_T.size() != 3) b.fail("centers_T", "must have three entries");
    if (c.fb_sigmas_T.size() != 3) b.fail("sigmas_T", "must have three entries");
    for (double sg : c.fb_sigmas_T) {
      if (!(sg > 0.0)) b.fail("sigmas_T", "entries must be > 0");
    }
    c.fb_overlap = b.number("overlap_with_f_a");
    if (!(c.fb_overlap > 0.0 && c.fb_overlap < 1.0)) b.fail("overlap_with_f_a", "must lie in (0, 1)");
    b.finish();
    s.finish();
  }
  {
    Section s = top.section("refine");
    c.refine_enabled = s.boolean("enabled");
    c.refine.knots = s.count("knots");
    if (c.refine.knots < 4) s.fail("knots", "must be >= 4");
    c.refine.max_evaluations = s.count("max_evaluations");
    c.refine.initial_step = s.positive("initial_step");
    c.refine.min_step = s.positive("min_step");
    c.refine.tolerance = s.number("tolerance");
    if (!(c.refine.tolerance >= 0.0)) s.fail("tolerance", "must be >= 0");
    s.finish();
  }
  {
    Section s = top.section("protocol");
    auto& p = c.protocol;
    p.n_channels = s.count("n_channels");
    p.m_check = s.count("m_check");
    const json& payload = s.at("payload");
    if (!payload.is_array()) s.fail("payload", "must be an array of 0/1");
    for (const auto& b : payload) {
      if (!b.is_number_unsigned() || b.get<std::uint64_t>() > 1) s.fail("payload", "must be an array of 0/1");
      p.payload.push_back(b.get<int>());
    }
    p.sender_delay = s.number("sender_delay_T") * c.cavity.T;
    p.classical_latency = s.number("classical_latency_T") * c.cavity.T;
    p.thresholds.z_crit = s.number("z_crit");
    p.thresholds.expected_r = s.number("expected_r");
    p.thresholds.expected_nr = s.number("expected_nr");
    Section e = s.section("eve");
    p.eve.kind = protocol::eve_kind_from_string(e.text("kind"));
    p.eve.intercept_probability = e.number("intercept_probability");
    e.finish();
    s.finish();
  }
  {
    const json& v = top.at("seed");
    if (!v.is_number_unsigned()) top.fail("seed", "must be a non-negative integer");
    c.set_seed(v.get<std::uint64_t>());
  }
  {
    Section s = top.section("output");
    c.out_dir = s.text("dir");
    c.stride = s.count("stride");
    if (c.stride == 0) s.fail("stride", "must be >= 1");
    s.finish();
  }
  top.finish();

  c.cavity.validate();
  c.protocol.validate(c.cavity);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(io::read_file(path)); }

}  // namespace pulseqsdc::cli
