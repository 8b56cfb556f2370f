#include "mbtgen/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mbtgen/error.hpp"
#include "mbtgen/event_log.hpp"
#include "mbtgen/http_server.hpp"
#include "mbtgen/json_export.hpp"

namespace mbtgen::cli {
namespace {

// Blocks termination signals for the calling thread and every thread it
// spawns afterwards; one watcher thread collects them with sigwait.
class SignalWatcher {
 public:
  SignalWatcher() {
    sigemptyset(&set_);
    sigaddset(&set_, SIGINT);
    sigaddset(&set_, SIGTERM);
    sigaddset(&set_, SIGUSR1);
    pthread_sigmask(SIG_BLOCK, &set_, &previous_);
  }

  ~SignalWatcher() {
    if (thread_.joinable()) {
      pthread_kill(thread_.native_handle(), SIGUSR1);
      thread_.join();
    }
    // Drop anything still pending so restoring the mask does not deliver it.
    timespec zero{0, 0};
    while (sigtimedwait(&set_, nullptr, &zero) > 0) {
    }
    pthread_sigmask(SIG_SETMASK, &previous_, nullptr);
  }

  template <typename F>
  void on_signal(F&& handler) {
    thread_ = std::thread([this, handler = std::forward<F>(handler)] {
      int sig = 0;
      sigwait(&set_, &sig);
      if (sig != SIGUSR1) handler(sig);
    });
  }

 private:
  sigset_t set_{};
  sigset_t previous_{};
  std::thread thread_;
};

}  // namespace

int cmd_serve(const ServiceConfig& config, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (!std::filesystem::is_directory(config.out_dir)) {
    err << "error: output directory '" << config.out_dir.string() << "' is not usable\n";
    return kExitIo;
  }

  SignalWatcher signals;
  ThreadScheduler scheduler;
  std::unique_ptr<SessionService> service;
  try {
    service = std::make_unique<SessionService>(config, scheduler);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  HttpServer server(*service);
  const int port = server.bind("0.0.0.0", config.port);
  if (port < 0) {
    err << "error: cannot bind port " << config.port << " (already in use?)\n";
    return kExitIo;
  }
  out << "listening on http://localhost:" << port << " (out-dir " << config.out_dir.string()
      << ", timeout " << config.keep_alive_timeout.count() << " ms)" << std::endl;

  signals.on_signal([&server](int) { server.stop(); });
  server.listen();

  service->shutdown();
  out << "stopped" << std::endl;
  return kExitOk;
}

int cmd_convert(const std::filesystem::path& input, const std::filesystem::path& output, Millis timeout,
                std::ostream& out, std::ostream& err) {
  if (timeout.count() <= 0) {
    err << "error: " << Error(ErrorCode::kInvalidDelay, "timer delay must be greater than 0 seconds").what()
        << '\n';
    return kExitInput;
  }
  std::ifstream in(input, std::ios::binary);
  if (!in) {
    err << "error: cannot read '" << input.string() << "'\n";
    return kExitIo;
  }

  ReplayResult replay;
  try {
    replay = replay_event_log(parse_event_log(in), timeout);
  } catch (const LogFormatError& e) {
    err << input.string() << ": " << e.what() << '\n';
    return kExitInput;
  }
  for (const auto& w : replay.warnings) err << "warning: " << w << '\n';

  const Model laid_out = generate_plane_data(std::move(replay.model));
  try {
    write_document(parse_model(laid_out), output);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  out << "wrote " << output.string() << ": " << laid_out.vertices().size() << " vertices, "
      << laid_out.edges().size() << " edges\n";
  return kExitOk;
}

int cmd_validate(const std::filesystem::path& input, std::ostream& out, std::ostream& err) {
  std::ifstream in(input, std::ios::binary);
  if (!in) {
    err << "error: cannot read '" << input.string() << "'\n";
    return kExitIo;
  }
  std::ostringstream text;
  text << in.rdbuf();

  const ValidationReport report = validate_document(text.str());
  for (const auto& v : report.violations) {
    out << to_string(v.kind);
    if (!v.element_id.empty()) out << " [" << v.element_id << "]";
    out << ": " << v.message << '\n';
  }
  if (!report.accepted()) {
    out << report.violations.size() << " violation(s)\n";
    return kExitValidation;
  }
  out << "ok\n";
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Builds GraphWalker models from recorded web clickstreams"};
  app.require_subcommand(1);

  ServiceConfig serve_config;
  long long serve_timeout = serve_config.keep_alive_timeout.count();
  std::string serve_out = serve_config.out_dir.string();
  auto* serve = app.add_subcommand("serve", "Run the recording service");
  serve->add_option("--port", serve_config.port, "TCP port")->capture_default_str();
  serve->add_option("--out-dir", serve_out, "Directory for saved models")->capture_default_str();
  serve->add_option("--timeout-ms", serve_timeout, "Keep-alive timeout in milliseconds")->capture_default_str();

  std::string convert_in;
  std::string convert_out;
  long long convert_timeout = 10'000;
  auto* convert = app.add_subcommand("convert", "Replay an event log into a model file");
  convert->add_option("input", convert_in, "Event log (one JSON record per line)")->required();
  convert->add_option("-o,--output", convert_out, "Model file to write")->required();
  convert->add_option("--timeout-ms", convert_timeout, "Simulated keep-alive timeout")->capture_default_str();

  std::string validate_in;
  auto* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("input", validate_in, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (*serve) {
    serve_config.out_dir = serve_out;
    serve_config.keep_alive_timeout = Millis{serve_timeout};
    return cmd_serve(serve_config, std::cout, std::cerr);
  }
  if (*convert) return cmd_convert(convert_in, convert_out, Millis{convert_timeout}, std::cout, std::cerr);
  return cmd_validate(validate_in, std::cout, std::cerr);
}

}  // namespace mbtgen::cli
