#include "otter/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>

namespace otter::cache {

namespace {

std::shared_mutex memo_mutex;
std::map<std::string, ExactSeries>& memo() {
  static std::map<std::string, ExactSeries> m;
  return m;
}

// Per-key compute lock so two threads never compute the same table twice.
std::mutex& key_mutex(const std::string& key) {
  static std::mutex guard;
  static std::map<std::string, std::mutex> locks;
  std::lock_guard<std::mutex> lk(guard);
  return locks[key];
}

class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ >= 0) ::flock(fd_, LOCK_EX);
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

std::optional<ExactSeries> try_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    return read_series(in);
  } catch (const SeriesError&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<std::filesystem::path> directory() {
  const char* dir = std::getenv("OTTER_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

ExactSeries load_or_compute(const std::string& key, const std::function<ExactSeries()>& compute) {
  {
    std::shared_lock lk(memo_mutex);
    if (auto it = memo().find(key); it != memo().end()) return it->second;
  }
  std::lock_guard<std::mutex> compute_lock(key_mutex(key));
  {
    std::shared_lock lk(memo_mutex);
    if (auto it = memo().find(key); it != memo().end()) return it->second;
  }

  std::optional<ExactSeries> result;
  if (auto dir = directory()) {
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    const auto file = *dir / (key + ".tsv");
    result = try_read(file);
    if (!result && !ec) {
      FileLock lock(*dir / (key + ".lock"));
      result = try_read(file);  // another process may have finished meanwhile
      if (!result) {
        result = compute();
        const auto tmp = *dir / (key + ".tsv.tmp" + std::to_string(::getpid()));
        {
          std::ofstream out(tmp);
          write_series(out, *result);
        }
        std::filesystem::rename(tmp, file, ec);
      }
    }
  }
  if (!result) result = compute();

  std::unique_lock lk(memo_mutex);
  return memo().emplace(key, std::move(*result)).first->second;
}

void clear_memory() {
  std::unique_lock lk(memo_mutex);
  memo().clear();
}

}  // namespace otter::cache
