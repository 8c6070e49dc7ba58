package com.example.uptime;

class UptimeLog {
  void record() {
    String line = android.util.TimeUtils.formatDuration(bootInterval);
    append(line);
  }
}
