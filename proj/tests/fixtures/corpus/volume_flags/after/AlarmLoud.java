package com.example.alarms;

import android.media.AudioManager;

class AlarmLoud {
  void boost(AudioManager am, int alarmChannel, int topVol) {
    int flags = 8;
    am.setStreamVolume(alarmChannel, topVol, flags, null);
  }
}
