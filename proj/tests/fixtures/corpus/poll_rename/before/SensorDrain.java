package com.example.sensors;

import android.hardware.SensorHub;

class SensorDrain {
  void drain(SensorHub hub) {
    int n = hub.pollEvents();
    log(n);
  }
}
