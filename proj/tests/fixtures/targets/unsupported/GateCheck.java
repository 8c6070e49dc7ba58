package com.app.sensors;

import android.hardware.SensorHub;

class GateCheck {
  void gate(SensorHub hub) {
    if (hub.pollEvents() > 0) {
      open();
    }
  }
}
