#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "charprobe/common/csv.hpp"
#include "charprobe/common/decimal.hpp"
#include "charprobe/common/digest.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/common/files.hpp"
#include "charprobe/common/http_json.hpp"
#include "charprobe/common/text.hpp"
#include "support/support.hpp"

using namespace charprobe;

TEST_CASE("format_fixed rounds half up on the shortest decimal form") {
  CHECK(format_fixed(91.25, 1) == "91.3");
  CHECK(format_fixed(96.875, 2) == "96.88");
  CHECK(format_fixed(0.125, 2) == "0.13");
  CHECK(format_fixed(2.675, 2) == "2.68");  // binary value is 2.67499999...
  CHECK(format_fixed(1.0, 2) == "1.00");
  CHECK(format_fixed(0.0, 0) == "0");
  CHECK(format_fixed(-1.25, 1) == "-1.3");
  CHECK(format_fixed(99.995, 2) == "100.00");
  CHECK(format_fixed(1e-9, 4) == "0.0000");
}

TEST_CASE("percentage values") {
  CHECK(format_fixed(*percentage(137, 144), 2) == "95.14");
  CHECK(format_fixed(*percentage(13, 28), 2) == "46.43");
  CHECK(format_fixed(*percentage(37, 40), 1) == "92.5");
  CHECK(*percentage(1, 4) == doctest::Approx(25.0));
  CHECK_FALSE(percentage(3, 0).has_value());
}

TEST_CASE("format_shortest round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e300, -2.5, 123456.789}) {
    CHECK(std::stod(format_shortest(v)) == v);
  }
  CHECK(format_shortest(0.1) == "0.1");
}

TEST_CASE("utf8 helpers") {
  CHECK(text::is_valid_utf8("caf\xc3\xa9"));
  CHECK_FALSE(text::is_valid_utf8("\xc3"));
  CHECK(text::decode("\xff").front() == 0xFFFD);
  const auto cps = text::decode("a\xc3\xa9\xf0\x9f\x98\x80");
  REQUIRE(cps.size() == 3);
  CHECK(cps[2] == 0x1F600);
  CHECK(text::encode(cps) == "a\xc3\xa9\xf0\x9f\x98\x80");
  CHECK(text::to_lower("\xc3\x89T\xc3\x89") == "\xc3\xa9t\xc3\xa9");
  CHECK(text::is_punctuation(U'!'));
  CHECK(text::is_punctuation(U'\u2014'));
  CHECK_FALSE(text::is_punctuation(U'$'));
  CHECK(text::is_emoji(0x1F600));
  CHECK_FALSE(text::is_emoji(U'a'));
  CHECK(text::split_whitespace("  a \t b\nc ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(text::collapse_whitespace("  a   b ") == "a b");
  CHECK(text::trim("\n x \t") == "x");
  CHECK(text::join({"a", "b"}, "-") == "a-b");
  CHECK(text::starts_with_ascii_ci("WWW.x", "www."));
}

TEST_CASE("digests match published test vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  std::uint64_t s = 0;
  CHECK(splitmix64(s) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("files: atomic write, jsonl round trip, diagnostics") {
  testsupport::TempDir dir;
  const auto p = dir / "sub/x.jsonl";
  write_file(p, to_jsonl({json{{"a", 1}}, json{{"b", "two"}}}));
  CHECK(read_file(p) == "{\"a\":1}\n{\"b\":\"two\"}\n");
  write_file(p, "{\"a\":1}\n\nnot json\n{\"c\":3}\n");
  const auto r = read_jsonl(p);
  CHECK(r.records.size() == 2);
  CHECK(r.records[1].line_no == 4);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].find(":3:") != std::string::npos);
  CHECK(file_sha256(p) == sha256_hex(read_file(p)));
  CHECK_THROWS_AS(read_file(dir / "missing"), Error);
}

TEST_CASE("csv parse and escape") {
  const auto rows = parse_csv("a,\"b,c\",\"d\"\"e\"\r\n1,,3\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(rows[1] == std::vector<std::string>{"1", "", "3"});
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_row({"x", "y z", "1,2"}) == "x,y z,\"1,2\"\n");
  CHECK(parse_csv(csv_row({"q\"", "\n"}))[0] == std::vector<std::string>{"q\"", "\n"});
  CHECK_THROWS_AS(parse_csv("\"open"), Error);
}

TEST_CASE("endpoint parsing") {
  auto e = net::parse_endpoint("http://127.0.0.1:9000/v1/");
  CHECK(e.scheme_host_port == "http://127.0.0.1:9000");
  CHECK(e.base_path == "/v1");
  e = net::parse_endpoint("localhost:8080");
  CHECK(e.scheme_host_port == "http://localhost:8080");
  CHECK(e.base_path.empty());
}

TEST_CASE("post_json and call_json against a local server") {
  httplib::Server server;
  server.Post("/v1/echo", [](const httplib::Request& req, httplib::Response& res) {
    res.set_content(req.body, "application/json");
  });
  server.Post("/v1/bad", [](const httplib::Request&, httplib::Response& res) { res.set_content("nope", "text/plain"); });
  server.Post("/v1/fail", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const auto ep = net::parse_endpoint("http://127.0.0.1:" + std::to_string(port) + "/v1");
  const json body{{"x", 1}};
  CHECK(net::post_json(ep, "/echo", body, std::chrono::seconds(5)) == body);
  CHECK_THROWS_AS(net::post_json(ep, "/bad", body, std::chrono::seconds(5)), Error);
  CHECK_THROWS_AS(net::post_json(ep, "/fail", body, std::chrono::seconds(5)), net::TransportFailure);
  server.stop();
  t.join();
  try {
    net::call_json(ep, "/echo", body, std::chrono::milliseconds(500));
    FAIL("expected BackendUnreachable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BackendUnreachable);
  }
}
