#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "mbtgen/cli.hpp"
#include "mbtgen/json_export.hpp"
#include "support.hpp"

extern char** environ;

using namespace mbtgen;
using namespace std::chrono_literals;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome convert(const std::filesystem::path& in, const std::filesystem::path& out, Millis timeout = 10'000ms) {
  std::ostringstream o, e;
  const int code = cli::cmd_convert(in, out, timeout, o, e);
  return {code, o.str(), e.str()};
}

Outcome validate(const std::filesystem::path& in) {
  std::ostringstream o, e;
  const int code = cli::cmd_validate(in, o, e);
  return {code, o.str(), e.str()};
}

// httplib::Server::stop() leaves a never-listened socket open, so probe with a raw one.
int free_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(fd >= 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  REQUIRE(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

// Runs the mbtgen binary with stdout/stderr captured into files.
class Child {
 public:
  Child(const std::vector<std::string>& args, const std::filesystem::path& log_dir) {
    out_ = log_dir / "child.out";
    err_ = log_dir / "child.err";
    std::vector<std::string> full = {MBTGEN_CLI_PATH};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : full) argv.push_back(a.data());
    argv.push_back(nullptr);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, 1, out_.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_addopen(&actions, 2, err_.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int rc = posix_spawn(&pid_, full[0].c_str(), &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    REQUIRE(rc == 0);
  }

  ~Child() {
    if (pid_ > 0) {
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
    }
  }

  int wait() {
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  }

  void signal(int sig) const { kill(pid_, sig); }
  std::string err() const { return testing::read_file(err_); }

 private:
  pid_t pid_ = -1;
  std::filesystem::path out_;
  std::filesystem::path err_;
};

}  // namespace

TEST_CASE("convert the bookshop log") {
  testing::TempDir dir;
  const auto log = dir.path() / "shop.ndjson";
  testing::write_file(log,
                      "{\"t\":0,\"type\":\"start\",\"name\":\"ShoppingCart\"}\n"
                      "{\"t\":100,\"type\":\"vertex\",\"name\":\"Amazon\"}\n"
                      "{\"t\":200,\"type\":\"edge\",\"name\":\"Search Book\"}\n"
                      "{\"t\":300,\"type\":\"vertex\",\"name\":\"Search Result\"}\n"
                      "{\"t\":400,\"type\":\"stop\"}\n");
  const auto out = dir.path() / "shop.json";
  const Outcome r = convert(log, out);
  CHECK(r.code == cli::kExitOk);
  const ModelDocument doc = read_document(testing::read_file(out));
  CHECK(doc.model.vertices.size() == 2);
  REQUIRE(doc.model.edges.size() == 1);
  CHECK(doc.model.edges[0].name == "e_SEARCHBOOK");

  CHECK(validate(out).code == cli::kExitOk);

  // deterministic: byte-identical on a second run
  const auto again = dir.path() / "again.json";
  convert(log, again);
  CHECK(testing::read_file(out) == testing::read_file(again));
}

TEST_CASE("convert error exits") {
  testing::TempDir dir;
  const auto empty = dir.path() / "empty.ndjson";
  testing::write_file(empty, "");
  CHECK(convert(empty, dir.path() / "x.json").code == cli::kExitInput);

  const auto bad = dir.path() / "bad.ndjson";
  testing::write_file(bad, "{\"t\":0,\"type\":\"start\",\"name\":\"S\"}\n{\"t\":1,\"type\":\"edge\"}\n");
  const Outcome r = convert(bad, dir.path() / "x.json");
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find("line 2") != std::string::npos);

  CHECK(convert(dir.path() / "missing.ndjson", dir.path() / "x.json").code == cli::kExitIo);

  const auto good = dir.path() / "good.ndjson";
  testing::write_file(good, "{\"t\":0,\"type\":\"start\",\"name\":\"S\"}\n");
  CHECK(convert(good, dir.path() / "no-such-dir" / "x.json").code == cli::kExitIo);
  CHECK(convert(good, dir.path() / "x.json", 0ms).code == cli::kExitInput);
}

TEST_CASE("validate exits") {
  testing::TempDir dir;
  const auto broken = dir.path() / "broken.json";
  testing::write_file(broken, R"J({"models":[{"name":"M","generator":"g","vertices":[
      {"id":"n1","name":"v_A","properties":{"x":0,"y":0}}],
      "edges":[{"id":"e7","name":"e_X","sourceVertexId":"n1","targetVertexId":"n9"}]}]})J");
  Outcome r = validate(broken);
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.out.find("e7") != std::string::npos);
  CHECK(r.out.find("DanglingEndpoint") != std::string::npos);

  const auto text = dir.path() / "text.json";
  testing::write_file(text, "hello");
  r = validate(text);
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.out.find("Syntax") != std::string::npos);

  CHECK(validate(dir.path() / "nope.json").code == cli::kExitIo);
}

TEST_CASE("serve rejects a zero timeout") {
  testing::TempDir dir;
  Child child({"serve", "--port", std::to_string(free_port()), "--out-dir", dir.path().string(), "--timeout-ms", "0"},
              dir.path());
  CHECK(child.wait() == cli::kExitInput);
  CHECK(child.err().find("InvalidDelay") != std::string::npos);
}

TEST_CASE("serve reports a busy port") {
  testing::TempDir dir;
  httplib::Server blocker;
  const int port = blocker.bind_to_any_port("0.0.0.0");
  REQUIRE(port > 0);
  Child child({"serve", "--port", std::to_string(port), "--out-dir", dir.path().string()}, dir.path());
  CHECK(child.wait() != 0);
  CHECK(child.err().find("cannot bind") != std::string::npos);
}

TEST_CASE("serve flushes the active session on SIGINT") {
  testing::TempDir dir;
  const auto models = dir.path() / "models";
  const int port = free_port();
  Child child({"serve", "--port", std::to_string(port), "--out-dir", models.string()}, dir.path());

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(1s);
  client.set_read_timeout(5s);
  httplib::Result res;
  for (int i = 0; i < 200; ++i) {
    res = client.Post("/startrec", httplib::Params{{"title", "PetClinic"}});
    if (res) break;
    std::this_thread::sleep_for(20ms);
  }
  REQUIRE(res);
  CHECK(res->body == "STARTED");
  client.Post("/vertex", httplib::Params{{"name", "Welcome Page"}});
  client.Post("/edge", httplib::Params{{"name", "Find Owners"}});
  client.Post("/vertex", httplib::Params{{"name", "Find Owners"}});

  child.signal(SIGINT);
  CHECK(child.wait() == 0);
  const auto file = models / "PetClinic.json";
  REQUIRE(std::filesystem::exists(file));
  const ModelDocument doc = read_document(testing::read_file(file));
  CHECK(doc.model.edges.at(0).name == "e_FINDOWNERS");
}
